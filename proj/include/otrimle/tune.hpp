#pragma once

#include <functional>
#include <span>
#include <vector>

#include "otrimle/em_rimle.hpp"

namespace otrimle {

struct TuneConfig {
  double beta = 0.0;            // weight of the noise-proportion penalty
  double delta_floor = 2.22e-308;
  bool include_zero = true;     // also score delta = 0
  int max_evals = 30;           // RIMLE fits per tuning run, all stages included
  int grid_points = 10;         // coarse bracketing grid before golden section
  double gs_tol = 1e-3;         // golden-section stopping width on the search variable

  void validate() const;
};

struct TuneEvaluation {
  double delta = 0.0;
  double criterion = 0.0;  // D(delta)
  double pi0 = 0.0;
  double objective = 0.0;  // D + beta * pi0, +inf for discarded fits
  bool boundary = false;
  bool failed = false;
};

struct TuneTrace {
  std::vector<TuneEvaluation> evaluations;
  double selected_delta = 0.0;
  RimleFit selected_fit;
};

/// Kolmogorov distance between the weighted empirical cdf of squared
/// distances and the chi-squared(p) cdf, evaluated at every distance:
/// max_i |M(d_i) - F(d_i)| with M(t) = sum_k w_k 1{d_k <= t} / sum_k w_k.
double weighted_kolmogorov(std::span<const double> distances, std::span<const double> weights, int p);

/// K_j for cluster j (1-based) of a fit, weighting by tau_j.
double cluster_kolmogorov(const Dataset& data, const RimleFit& fit, int j);

/// Proportion-weighted mean of the cluster distances.
double criterion_D(const Dataset& data, const RimleFit& fit);
double criterion_D(std::span<const double> k_values, std::span<const double> proportions);

/// Largest Gaussian peak density over the initial clusters' moment fits.
double delta_max(const Dataset& data, const Labeling& init, const ConstraintConfig& constraints = {});

struct GoldenSectionResult {
  double argmin = 0.0;
  double value = 0.0;
  int evaluations = 0;
};

/// Golden-ratio interval reduction on [lo, hi]. Non-finite values count as
/// +inf. Stops when the bracket is narrower than tol or the budget is spent,
/// returning the best point evaluated.
GoldenSectionResult golden_section_min(const std::function<double(double)>& f, double lo, double hi, double tol,
                                       int max_evals);

/// Coarse log grid to bracket, then golden section inside the best bracket.
/// `f` is called at most `max_evals` times; the best evaluated point wins,
/// with ties resolved toward smaller arguments.
GoldenSectionResult bracketed_minimize(const std::function<double(double)>& f, double lo, double hi, int grid_points,
                                       double tol, int max_evals);

/// delta is searched on x = -log(1 + log(delta_max) - log(delta)), a monotone
/// map that spends most grid points near delta_max.
TuneTrace fit_otrimle(const Dataset& data, const Labeling& init, const RimleConfig& cfg, const TuneConfig& tune);

}  // namespace otrimle
