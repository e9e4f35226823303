#pragma once

#include <span>
#include <vector>

#include "otrimle/core_model.hpp"

namespace otrimle {

struct ConstraintConfig {
  double gamma = 20.0;   // bound on lambda_max / lambda_min over all clusters
  double pi_max = 0.5;   // bound on the mean noise responsibility

  void validate() const;
};

struct EigenratioProjection {
  std::vector<Matrix> sigmas;
  bool active = false;  // true when any eigenvalue was truncated
  double level = 0.0;   // lower truncation level m; eigenvalues end up in [m, gamma*m]
};

/// Truncates the pooled eigenvalues of all matrices into [m, gamma*m], keeping
/// eigenvectors. m minimises sum_j w_j sum_k (log l_jk + d_jk / l_jk), the
/// Gaussian log-likelihood loss of replacing eigenvalue d_jk by l_jk, which
/// makes this the exact constrained M-step when w_j are cluster weights.
/// Empty `weights` means equal weights.
EigenratioProjection project_eigenratio(const std::vector<Matrix>& sigmas, double gamma,
                                        std::span<const double> weights = {});

std::vector<Matrix> enforce_eigenratio(const std::vector<Matrix>& sigmas, double gamma,
                                       std::span<const double> weights = {});

/// Largest eigenvalue over all matrices divided by the smallest.
double eigenratio(const std::vector<Matrix>& sigmas);

struct NoiseCapStatus {
  bool active = false;
  double mean_tau0 = 0.0;
};

NoiseCapStatus noise_cap_active(const PseudoPosteriors& tau, double pi_max);

struct NoiseCapProjection {
  MixtureParams theta;
  bool boundary = false;  // the cap binds: mean tau0 sits at pi_max
  double mean_tau0 = 0.0;
};

/// Lowers pi0 by bisection (rescaling cluster proportions to keep total mass 1)
/// until the mean noise responsibility equals pi_max. Returns theta unchanged
/// when the cap already holds.
NoiseCapProjection enforce_noise_cap(const MixtureParams& theta, const Dataset& data, double pi_max);

}  // namespace otrimle
