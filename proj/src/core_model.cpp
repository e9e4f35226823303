#include "otrimle/core_model.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "otrimle/error.hpp"

namespace otrimle {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kLog2Pi = 1.8378770664093454835606594728112;

double safe_log(double v) { return v > 0.0 ? std::log(v) : kNegInf; }

}  // namespace

Matrix log_component_terms(const Dataset& data, const MixtureParams& theta) {
  theta.validate();
  if (theta.p() != data.p()) throw Error(ErrorKind::kDimensionMismatch, "data and parameter dimensions differ");
  const int n = data.n();
  const int g = theta.g();
  Matrix out(n, g + 1);
  out.col(0).setConstant(safe_log(theta.pi0) + safe_log(theta.delta));
  for (int j = 0; j < g; ++j) {
    const double log_pi = safe_log(theta.pi(j));
    if (std::isinf(log_pi)) {
      out.col(j + 1).setConstant(kNegInf);
      continue;
    }
    const CovFactor factor(theta.sigma[j]);
    const double norm = log_pi - 0.5 * (data.p() * kLog2Pi + factor.log_det());
    out.col(j + 1) = (norm - 0.5 * factor.mahalanobis_sq_rows(data.points(), theta.mu[j]).array()).matrix();
  }
  return out;
}

Dataset::Dataset(Matrix points) : points_(std::move(points)) {
  if (points_.rows() < 1 || points_.cols() < 1) throw Error(ErrorKind::kInvalidInput, "dataset needs n >= 1 and p >= 1");
  if (!points_.allFinite()) throw Error(ErrorKind::kInvalidInput, "dataset contains non-finite coordinates");
}

void MixtureParams::validate() const {
  const int groups = g();
  if (groups < 1) throw Error(ErrorKind::kInvalidInput, "need at least one cluster");
  if (static_cast<int>(mu.size()) != groups || static_cast<int>(sigma.size()) != groups) {
    throw Error(ErrorKind::kInvalidInput, "parameter vectors have inconsistent lengths");
  }
  if (!(pi0 >= 0.0 && pi0 <= 1.0) || (pi.array() < 0.0).any() || (pi.array() > 1.0).any()) {
    throw Error(ErrorKind::kInvalidInput, "proportions must lie in [0,1]");
  }
  if (std::abs(pi0 + pi.sum() - 1.0) > 1e-12) throw Error(ErrorKind::kInvalidInput, "proportions must sum to 1");
  if (!(delta >= 0.0) || std::isinf(delta)) throw Error(ErrorKind::kInvalidInput, "delta must be finite and >= 0");
  const auto dim = mu.front().size();
  for (int j = 0; j < groups; ++j) {
    if (mu[j].size() != dim || sigma[j].rows() != dim || sigma[j].cols() != dim) {
      throw Error(ErrorKind::kInvalidInput, "cluster " + std::to_string(j + 1) + " has wrong dimension");
    }
    if (!mu[j].allFinite()) throw Error(ErrorKind::kInvalidInput, "non-finite mean");
    if ((sigma[j] - sigma[j].transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, sigma[j].cwiseAbs().maxCoeff())) {
      throw Error(ErrorKind::kInvalidInput, "covariance " + std::to_string(j + 1) + " is not symmetric");
    }
  }
}

double log_improper_density(const Vector& x, const MixtureParams& theta) {
  if (!x.allFinite()) throw Error(ErrorKind::kInvalidInput, "non-finite point");
  Matrix row(1, x.size());
  row.row(0) = x.transpose();
  const Matrix terms = log_component_terms(Dataset(row), theta);
  return log_sum_exp(terms.data(), static_cast<int>(terms.size()));
}

double improper_density(const Vector& x, const MixtureParams& theta) {
  return std::exp(log_improper_density(x, theta));
}

EStep expectation(const Dataset& data, const MixtureParams& theta) {
  const Matrix terms = log_component_terms(data, theta);
  const int n = data.n();
  const int cols = static_cast<int>(terms.cols());
  EStep out;
  out.tau.tau.resize(n, cols);
  double total = 0.0;
  std::vector<double> buf(cols);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < cols; ++k) buf[k] = terms(i, k);
    const double lse = log_sum_exp(buf.data(), cols);
    if (!std::isfinite(lse)) {
      throw Error(ErrorKind::kDegenerateDensity, "improper density is zero at observation " + std::to_string(i + 1));
    }
    total += lse;
    for (int k = 0; k < cols; ++k) out.tau.tau(i, k) = std::exp(buf[k] - lse);
  }
  out.loglik = total / n;
  return out;
}

double pseudo_loglik(const Dataset& data, const MixtureParams& theta) { return expectation(data, theta).loglik; }

PseudoPosteriors posteriors(const Dataset& data, const MixtureParams& theta) {
  return expectation(data, theta).tau;
}

Labeling assign(const PseudoPosteriors& tau) {
  Labeling labels(tau.n());
  for (int i = 0; i < tau.n(); ++i) {
    int best = 0;
    for (int k = 1; k < tau.tau.cols(); ++k) {
      if (tau.tau(i, k) > tau.tau(i, best)) best = k;
    }
    labels[i] = best;
  }
  return labels;
}

}  // namespace otrimle
