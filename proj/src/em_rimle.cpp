#include "otrimle/em_rimle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "otrimle/error.hpp"
#include "otrimle/init.hpp"

namespace otrimle {

namespace {

// A zero initial pi0 is a fixed point of the pi0 update, so RIMLE fits start
// with at least this much noise mass.
constexpr double kInitialNoiseFloor = 0.01;

void renormalize(MixtureParams& theta) {
  const double total = theta.pi0 + theta.pi.sum();
  theta.pi0 /= total;
  theta.pi /= total;
  theta.pi0 = std::max(0.0, 1.0 - theta.pi.sum());
}

}  // namespace

void RimleConfig::validate() const {
  if (!(delta >= 0.0) || std::isinf(delta)) throw Error(ErrorKind::kInvalidInput, "delta must be finite and >= 0");
  if (g < 1) throw Error(ErrorKind::kInvalidInput, "g must be >= 1");
  if (!(tol > 0.0)) throw Error(ErrorKind::kInvalidInput, "tol must be positive");
  if (max_iter < 0) throw Error(ErrorKind::kInvalidInput, "max_iter must be >= 0");
  constraints.validate();
}

EmStepResult maximization(const Dataset& data, const PseudoPosteriors& tau, const MixtureParams& current,
                          const RimleConfig& cfg) {
  const int n = data.n();
  const int g = cfg.g;
  const Matrix& x = data.points();
  EmStepResult out;
  MixtureParams& next = out.theta;
  next.delta = current.delta;
  next.pi.resize(g);
  next.mu.resize(g);
  next.sigma.resize(g);
  std::vector<double> weights(g);
  for (int j = 0; j < g; ++j) {
    const Vector w = tau.tau.col(j + 1);
    const double nj = w.sum();
    if (!(nj >= 1e-10 * n)) {
      throw Error(ErrorKind::kClusterCollapse, "cluster " + std::to_string(j + 1) + " lost all its weight");
    }
    weights[j] = nj;
    next.pi(j) = nj / n;
    next.mu[j] = x.transpose() * w / nj;
    const Matrix centered = x.rowwise() - next.mu[j].transpose();
    Matrix s = centered.transpose() * w.asDiagonal() * centered / nj;
    next.sigma[j] = 0.5 * (s + s.transpose());
  }
  next.pi0 = current.delta > 0.0 ? tau.tau.col(0).mean() : 0.0;
  renormalize(next);

  const EigenratioProjection proj = project_eigenratio(next.sigma, cfg.constraints.gamma, weights);
  next.sigma = proj.sigmas;
  out.eigenratio_active = proj.active;

  if (next.delta > 0.0 && next.pi0 > 0.0) {
    NoiseCapProjection cap = enforce_noise_cap(next, data, cfg.constraints.pi_max);
    out.noise_cap_active = cap.boundary;
    next = std::move(cap.theta);
  }
  return out;
}

MixtureParams em_step(const Dataset& data, const MixtureParams& theta, const RimleConfig& cfg) {
  const EStep e = expectation(data, theta);
  return maximization(data, e.tau, theta, cfg).theta;
}

MixtureParams params_from_partition(const Dataset& data, const Labeling& init, const RimleConfig& cfg) {
  const int n = data.n();
  const int g = cfg.g;
  if (static_cast<int>(init.size()) != n) throw Error(ErrorKind::kDimensionMismatch, "initial labels do not match data");
  PseudoPosteriors crisp;
  crisp.tau = Matrix::Zero(n, g + 1);
  int noise = 0;
  for (int i = 0; i < n; ++i) {
    if (init[i] < 0 || init[i] > g) {
      throw Error(ErrorKind::kInitializationFailure, "initial label out of range at observation " + std::to_string(i + 1));
    }
    crisp.tau(i, init[i]) = 1.0;
    noise += init[i] == 0;
  }
  if (noise == n) throw Error(ErrorKind::kInitializationFailure, "initial partition has no cluster points");

  // Moments of each group from its members only.
  const Matrix& x = data.points();
  MixtureParams theta;
  theta.delta = cfg.delta;
  theta.pi.resize(g);
  theta.mu.resize(g);
  theta.sigma.resize(g);
  std::vector<double> weights(g);
  for (int j = 0; j < g; ++j) {
    const Vector w = crisp.tau.col(j + 1);
    const double nj = w.sum();
    if (nj < 1.0) throw Error(ErrorKind::kInitializationFailure, "initial cluster " + std::to_string(j + 1) + " is empty");
    weights[j] = nj;
    theta.mu[j] = x.transpose() * w / nj;
    const Matrix centered = x.rowwise() - theta.mu[j].transpose();
    Matrix s = centered.transpose() * w.asDiagonal() * centered / nj;
    theta.sigma[j] = 0.5 * (s + s.transpose());
  }
  if (cfg.delta > 0.0) {
    theta.pi0 = std::max(static_cast<double>(noise) / n, kInitialNoiseFloor);
    for (int j = 0; j < g; ++j) theta.pi(j) = (1.0 - theta.pi0) * weights[j] / (n - noise);
  } else {
    theta.pi0 = 0.0;
    for (int j = 0; j < g; ++j) theta.pi(j) = weights[j] / (n - noise);
  }
  renormalize(theta);
  theta.sigma = enforce_eigenratio(theta.sigma, cfg.constraints.gamma, weights);
  if (cfg.delta > 0.0) theta = enforce_noise_cap(theta, data, cfg.constraints.pi_max).theta;
  return theta;
}

RimleFit fit_rimle(const Dataset& data, const Labeling& init, const RimleConfig& cfg) {
  cfg.validate();
  const int n = data.n();
  const int distinct = count_distinct(data);
  const int needed = cfg.delta > 0.0 ? cfg.g + static_cast<int>(std::ceil(n * cfg.constraints.pi_max)) : cfg.g;
  if (distinct <= needed) {
    throw Error(ErrorKind::kInvalidInput, "need more than " + std::to_string(needed) + " distinct points, have " +
                                              std::to_string(distinct));
  }

  RimleFit fit;
  MixtureParams theta = params_from_partition(data, init, cfg);
  EStep e = expectation(data, theta);
  if (!std::isfinite(e.loglik)) throw Error(ErrorKind::kNonFiniteLikelihood, "initial likelihood is not finite");
  fit.loglik_trace.push_back(e.loglik);
  bool last_eigen = false;
  bool last_cap = false;
  for (int it = 1; it <= cfg.max_iter; ++it) {
    EmStepResult step = maximization(data, e.tau, theta, cfg);
    EStep next = expectation(data, step.theta);
    if (!std::isfinite(next.loglik)) throw Error(ErrorKind::kNonFiniteLikelihood, "likelihood became non-finite");
    theta = std::move(step.theta);
    e = std::move(next);
    last_eigen = step.eigenratio_active;
    last_cap = step.noise_cap_active;
    fit.projected.push_back(step.eigenratio_active || step.noise_cap_active);
    fit.loglik_trace.push_back(e.loglik);
    fit.iterations = it;
    const double prev = fit.loglik_trace[fit.loglik_trace.size() - 2];
    if (std::abs(e.loglik - prev) <= cfg.tol * std::abs(e.loglik)) {
      fit.converged = true;
      break;
    }
  }

  fit.params = std::move(theta);
  fit.tau = std::move(e.tau);
  fit.labels = assign(fit.tau);
  fit.pi0_hat = fit.tau.tau.col(0).mean();
  fit.noise_cap_binding = cfg.delta > 0.0 && (last_cap || fit.pi0_hat >= cfg.constraints.pi_max - 1e-6);
  fit.eigenratio_binding = last_eigen;
  fit.boundary = fit.noise_cap_binding || fit.eigenratio_binding;
  return fit;
}

RimleFit fit_gmix(const Dataset& data, const Labeling& init, RimleConfig cfg) {
  cfg.delta = 0.0;
  return fit_rimle(data, init, cfg);
}

double bounding_box_volume(const Dataset& data) {
  const Vector range = data.points().colwise().maxCoeff() - data.points().colwise().minCoeff();
  if ((range.array() <= 0.0).any()) throw Error(ErrorKind::kDegenerateVolume, "a coordinate has zero range");
  return range.prod();
}

RimleFit fit_gmix_u(const Dataset& data, const Labeling& init, RimleConfig cfg) {
  cfg.delta = 1.0 / bounding_box_volume(data);
  return fit_rimle(data, init, cfg);
}

}  // namespace otrimle
