#pragma once

#include <optional>
#include <string>
#include <vector>

#include "otrimle/comparators.hpp"
#include "otrimle/init.hpp"
#include "otrimle/tune.hpp"

namespace otrimle {

/// Settings shared by every method; unset values take the method default
/// (gamma 20, pi_max 0.5, beta 0 or 1/3 for the ".p" variants, trim 0.1, nu 3).
struct MethodSettings {
  int g = 2;
  std::optional<double> delta;  // rimle only
  std::optional<double> beta;
  double gamma = 20.0;
  double pi_max = 0.5;
  std::optional<double> trim;
  double nu = 3.0;
};

/// Method-independent summary of a fit, the content of a result file.
struct FitResult {
  std::string method;
  int g = 0;
  int p = 0;
  MixtureParams params;  // tmix: scale matrices; tclust: retained-point shares
  std::vector<ClusterTriple> triples;
  Labeling labels;       // native labels; 0 = noise or trimmed
  double pi0 = 0.0;      // estimated noise proportion (trimmed share for tclust)
  double delta = 0.0;
  double trim = 0.0;
  double beta = 0.0;
  double nu = 0.0;
  std::vector<double> trace;  // log-likelihood, or the classification objective for tclust
  std::vector<bool> projected;
  bool converged = false;
  int iterations = 0;
  std::vector<TuneEvaluation> delta_tuning;
  std::vector<TrimEvaluation> trim_tuning;
};

/// Method names accepted by run_method.
const std::vector<std::string>& method_names();

/// Fits `method` from the initial partition. Throws on unknown methods and
/// on fit failures.
FitResult run_method(const std::string& method, const Dataset& data, const Labeling& init,
                     const MethodSettings& settings);

/// Default initial partition for g clusters.
Labeling default_initial_partition(const Dataset& data, int g);

}  // namespace otrimle
