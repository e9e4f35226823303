#pragma once

#include <vector>

#include "otrimle/constraints.hpp"
#include "otrimle/core_model.hpp"

namespace otrimle {

struct RimleConfig {
  double delta = 0.0;
  int g = 2;
  ConstraintConfig constraints;
  double tol = 1e-10;  // relative change of l_n that stops the iteration
  int max_iter = 500;

  void validate() const;
};

struct RimleFit {
  MixtureParams params;
  PseudoPosteriors tau;
  Labeling labels;
  std::vector<double> loglik_trace;  // l_n at the initial and every updated iterate
  // projected[k] is true when the step producing loglik_trace[k + 1] truncated
  // eigenvalues or lowered pi0.
  std::vector<bool> projected;
  double pi0_hat = 0.0;  // mean noise responsibility
  bool converged = false;
  bool noise_cap_binding = false;   // mean tau0 within 1e-6 of pi_max
  bool eigenratio_binding = false;  // last step truncated eigenvalues
  bool boundary = false;            // either constraint active at the solution
  int iterations = 0;
};

/// One constrained EM update plus bookkeeping on which projections fired.
struct EmStepResult {
  MixtureParams theta;
  bool eigenratio_active = false;
  bool noise_cap_active = false;
};

/// M-step from given responsibilities, then eigenratio truncation and, if the
/// new parameters violate it, the noise cap.
EmStepResult maximization(const Dataset& data, const PseudoPosteriors& tau, const MixtureParams& current,
                          const RimleConfig& cfg);

/// E-step at theta followed by `maximization`.
MixtureParams em_step(const Dataset& data, const MixtureParams& theta, const RimleConfig& cfg);

/// Proportions, moments and (projected) covariances of the initial groups.
/// Label 0 points seed pi0 when delta > 0 and are ignored otherwise.
MixtureParams params_from_partition(const Dataset& data, const Labeling& init, const RimleConfig& cfg);

RimleFit fit_rimle(const Dataset& data, const Labeling& init, const RimleConfig& cfg);

/// Plain Gaussian mixture ML under the eigenratio constraint (delta = 0).
RimleFit fit_gmix(const Dataset& data, const Labeling& init, RimleConfig cfg);

/// Volume of the smallest axis-aligned box containing the data.
double bounding_box_volume(const Dataset& data);

/// RIMLE with delta = 1 / bounding_box_volume, the uniform-noise-component fit.
RimleFit fit_gmix_u(const Dataset& data, const Labeling& init, RimleConfig cfg);

}  // namespace otrimle
