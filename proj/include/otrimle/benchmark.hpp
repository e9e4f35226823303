#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "otrimle/dgp.hpp"
#include "otrimle/methods.hpp"

namespace otrimle {

/// Environment variable holding the default worker count.
inline constexpr const char* kWorkersEnv = "OTRIMLE_WORKERS";

struct BenchmarkConfig {
  std::vector<DgpSpec> specs;
  std::vector<std::string> methods;
  int replicates = 10;
  std::uint64_t master_seed = 1;
  std::optional<int> n;      // overrides every spec's sample size
  MethodSettings settings;   // g is taken from each spec
  int workers = 1;

  void validate() const;
};

struct ReplicateRecord {
  std::string dgp;
  std::string method;
  int replicate = 0;
  bool failed = false;
  std::string error;
  double mcr = 0.0;
  double pi0 = 0.0;
  double delta = 0.0;
  double trim = 0.0;
  int tuning_evaluations = 0;
};

struct ReportRow {
  std::string dgp;
  std::string method;
  int replicates = 0;
  double mean_mcr = 0.0;  // over successful replicates
  double se = 0.0;        // sample sd / sqrt(successes); 0 with fewer than two
  int failures = 0;
};

struct BenchmarkReport {
  std::vector<ReportRow> rows;
  std::vector<ReplicateRecord> records;  // ordered by dgp, replicate, method
};

/// Called before every fit; throwing marks that fit as failed. Test hook.
using FitHook = std::function<void(const std::string& dgp, const std::string& method, int replicate)>;

/// For every spec and replicate: sample from the replicate's own stream, build
/// one initial partition, fit every method from it, relabel points by the
/// estimated parameters and score mcr against the reference-truth labels.
/// Failures are recorded, never fatal. Output does not depend on `workers`.
BenchmarkReport run_benchmark(const BenchmarkConfig& cfg, const FitHook& hook = {});

/// Worker count from kWorkersEnv, else the hardware concurrency.
int default_workers();

std::string report_table(const BenchmarkReport& report);
std::string report_to_text(const BenchmarkReport& report);
BenchmarkReport report_from_text(const std::string& text);
std::string records_csv(const BenchmarkReport& report);

/// JSON benchmark configuration: dgps (builtin names or inline specs),
/// methods, replicates, seed, optional n and method settings.
BenchmarkConfig benchmark_config_from_text(const std::string& text);

}  // namespace otrimle
