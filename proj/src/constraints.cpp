#include "otrimle/constraints.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "otrimle/error.hpp"

namespace otrimle {

void ConstraintConfig::validate() const {
  if (!(gamma >= 1.0) || std::isinf(gamma)) throw Error(ErrorKind::kInvalidInput, "gamma must be a finite value >= 1");
  if (!(pi_max > 0.0 && pi_max < 1.0)) throw Error(ErrorKind::kInvalidInput, "pi_max must lie in (0,1)");
}

namespace {

struct WeightedEigen {
  double value;
  double weight;
};

double truncation_loss(const std::vector<WeightedEigen>& eig, double m, double gamma) {
  double loss = 0.0;
  for (const auto& e : eig) {
    const double l = std::clamp(e.value, m, gamma * m);
    loss += e.weight * (std::log(l) + e.value / l);
  }
  return loss;
}

}  // namespace

double eigenratio(const std::vector<Matrix>& sigmas) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (const auto& s : sigmas) {
    const Vector v = sym_eigen(s).values;
    hi = std::max(hi, v(0));
    lo = std::min(lo, v(v.size() - 1));
  }
  return lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
}

EigenratioProjection project_eigenratio(const std::vector<Matrix>& sigmas, double gamma,
                                        std::span<const double> weights) {
  if (!(gamma >= 1.0)) throw Error(ErrorKind::kInvalidInput, "gamma must be >= 1");
  if (sigmas.empty()) throw Error(ErrorKind::kInvalidInput, "no matrices to constrain");
  if (!weights.empty() && weights.size() != sigmas.size()) {
    throw Error(ErrorKind::kInvalidInput, "one weight per matrix required");
  }
  double weight_total = 0.0;
  for (double w : weights) weight_total += std::max(w, 0.0);
  const bool uniform = weights.empty() || weight_total <= 0.0;

  std::vector<EigenDecomp> decomp;
  decomp.reserve(sigmas.size());
  std::vector<WeightedEigen> pooled;
  double hi = 0.0;
  double lo = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < sigmas.size(); ++j) {
    decomp.push_back(sym_eigen(sigmas[j]));
    const double w = uniform ? 1.0 : std::max(weights[j], 0.0);
    for (Eigen::Index k = 0; k < decomp.back().values.size(); ++k) {
      const double v = std::max(decomp.back().values(k), 0.0);
      pooled.push_back({v, w});
      hi = std::max(hi, v);
      lo = std::min(lo, v);
    }
  }
  if (hi <= 0.0) throw Error(ErrorKind::kDegenerateScatter, "all eigenvalues are zero or negative");

  EigenratioProjection out;
  if (lo > 0.0 && hi <= gamma * lo * (1.0 + 1e-10)) {
    out.sigmas = sigmas;
    out.level = lo;
    return out;
  }

  // The loss is piecewise smooth in m with kinks at d and d/gamma. Between
  // kinks the clipped sets are fixed and the stationary point is closed form.
  std::vector<double> breaks;
  for (const auto& e : pooled) {
    if (e.value > 0.0) {
      breaks.push_back(e.value);
      breaks.push_back(e.value / gamma);
    }
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  double best_m = breaks.front();
  double best_loss = truncation_loss(pooled, best_m, gamma);
  auto consider = [&](double m) {
    const double loss = truncation_loss(pooled, m, gamma);
    if (loss < best_loss) {
      best_loss = loss;
      best_m = m;
    }
  };
  for (std::size_t a = 0; a < breaks.size(); ++a) {
    consider(breaks[a]);
    if (a + 1 == breaks.size()) break;
    const double left = breaks[a];
    const double right = breaks[a + 1];
    const double mid = 0.5 * (left + right);
    double num = 0.0;
    double den = 0.0;
    for (const auto& e : pooled) {
      if (e.value < mid) {
        num += e.weight * e.value;
        den += e.weight;
      } else if (e.value > gamma * mid) {
        num += e.weight * e.value / gamma;
        den += e.weight;
      }
    }
    if (den > 0.0) consider(std::clamp(num / den, left, right));
  }

  out.level = best_m;
  out.active = true;
  out.sigmas.reserve(sigmas.size());
  for (const auto& d : decomp) {
    Vector l = d.values;
    for (Eigen::Index k = 0; k < l.size(); ++k) l(k) = std::clamp(std::max(l(k), 0.0), best_m, gamma * best_m);
    Matrix s = d.vectors * l.asDiagonal() * d.vectors.transpose();
    out.sigmas.push_back(0.5 * (s + s.transpose()));
  }
  return out;
}

std::vector<Matrix> enforce_eigenratio(const std::vector<Matrix>& sigmas, double gamma,
                                       std::span<const double> weights) {
  return project_eigenratio(sigmas, gamma, weights).sigmas;
}

NoiseCapStatus noise_cap_active(const PseudoPosteriors& tau, double pi_max) {
  NoiseCapStatus s;
  s.mean_tau0 = tau.n() > 0 ? tau.tau.col(0).mean() : 0.0;
  s.active = s.mean_tau0 > pi_max;
  return s;
}

NoiseCapProjection enforce_noise_cap(const MixtureParams& theta, const Dataset& data, double pi_max) {
  if (!(pi_max > 0.0 && pi_max < 1.0)) throw Error(ErrorKind::kInvalidInput, "pi_max must lie in (0,1)");
  const Matrix terms = log_component_terms(data, theta);
  const int n = data.n();
  const int g = theta.g();

  // log of sum_j pi_j phi_j at the original proportions
  Vector log_mix(n);
  std::vector<double> buf(g);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < g; ++j) buf[j] = terms(i, j + 1);
    log_mix(i) = log_sum_exp(buf.data(), g);
  }
  const double cluster_mass = theta.pi.sum();
  const double log_delta = theta.delta > 0.0 ? std::log(theta.delta) : -std::numeric_limits<double>::infinity();

  auto mean_tau0 = [&](double pi0) {
    if (pi0 <= 0.0 || std::isinf(log_delta)) return 0.0;
    const double noise = std::log(pi0) + log_delta;
    const double shift = std::log1p(-pi0) - std::log(cluster_mass);
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      const double other = log_mix(i) + shift;
      const double top = std::max(noise, other);
      total += std::exp(noise - top) / (std::exp(noise - top) + std::exp(other - top));
    }
    return total / n;
  };

  NoiseCapProjection out{theta, false, mean_tau0(theta.pi0)};
  if (out.mean_tau0 <= pi_max) return out;
  if (cluster_mass <= 0.0) {
    // No cluster mass to rescale; spread the released mass evenly.
    out.theta.pi = Vector::Constant(g, 1.0 / g);
    out.theta.pi0 = 0.0;
    return enforce_noise_cap(out.theta, data, pi_max);
  }

  double lo = 0.0;
  double hi = theta.pi0;
  for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mean_tau0(mid) > pi_max) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  out.theta.pi0 = lo;
  out.theta.pi = theta.pi * ((1.0 - lo) / cluster_mass);
  out.theta.pi0 = 1.0 - out.theta.pi.sum();
  if (out.theta.pi0 < 0.0) out.theta.pi0 = 0.0;
  out.mean_tau0 = mean_tau0(out.theta.pi0);
  out.boundary = true;
  return out;
}

}  // namespace otrimle
