#pragma once

#include <vector>

#include "otrimle/em_rimle.hpp"
#include "otrimle/tune.hpp"

namespace otrimle {

struct TclustConfig {
  double trim_alpha = 0.1;
  int g = 2;
  ConstraintConfig constraints;
  double tol = 1e-10;
  int max_iter = 500;

  void validate() const;
};

struct TclustFit {
  MixtureParams params;             // pi are shares among retained points; pi0 == 0
  Labeling labels;                  // 0 = trimmed
  Labeling best_cluster;            // best-scoring cluster of every point, trimmed or not
  std::vector<double> objective_trace;
  std::vector<int> retained_trace;  // retained count at every assignment step
  double trim_alpha = 0.0;
  bool converged = false;
  int iterations = 0;
};

/// Trimmed classification EM maximising
/// sum_j sum_{i in R_j} (log pi_j + log phi(x_i; mu_j, Sigma_j)) over
/// partitions R_1..R_G of floor(n (1 - alpha)) retained points.
TclustFit fit_tclust(const Dataset& data, const Labeling& init, const TclustConfig& cfg);

struct TrimEvaluation {
  double trim = 0.0;
  double criterion = 0.0;
  double objective = 0.0;
  bool failed = false;
};

struct OtTclustResult {
  TclustFit fit;
  double selected_trim = 0.0;
  std::vector<TrimEvaluation> evaluations;
};

/// Kolmogorov criterion for a TCLUST fit with crisp weights: each cluster's
/// distances come from the retained points assigned to it.
double crisp_criterion_D(const Dataset& data, const TclustFit& fit);

/// Trimming level chosen by minimising D(trim) + beta * trim over [0, 0.5].
OtTclustResult ot_tclust(const Dataset& data, const Labeling& init, const TclustConfig& cfg, const TuneConfig& tune);

struct TmixConfig {
  double nu = 3.0;
  int g = 2;
  ConstraintConfig constraints;
  double tol = 1e-10;
  int max_iter = 500;

  void validate() const;
};

struct TmixFit {
  MixtureParams params;  // sigma holds scale matrices; pi0 == 0
  PseudoPosteriors tau;  // column 0 identically zero
  Labeling labels;
  std::vector<double> loglik_trace;
  std::vector<bool> projected;
  double nu = 3.0;
  bool converged = false;
  int iterations = 0;
};

/// EM for a Student-t mixture with fixed, common degrees of freedom and the
/// eigenratio constraint on scale matrices.
TmixFit fit_tmix(const Dataset& data, const Labeling& init, const TmixConfig& cfg);

double tmix_loglik(const Dataset& data, const MixtureParams& params, double nu);

struct ClusterTriple {
  double pi = 0.0;
  Vector center;
  Matrix scatter;
};

/// Cluster proportions renormalised over clusters, centres and covariances.
std::vector<ClusterTriple> params_to_cluster_triples(const RimleFit& fit);
std::vector<ClusterTriple> params_to_cluster_triples(const TclustFit& fit);
/// t covariances are nu / (nu - 2) times the scale; undefined for nu <= 2.
std::vector<ClusterTriple> params_to_cluster_triples(const TmixFit& fit);

}  // namespace otrimle
