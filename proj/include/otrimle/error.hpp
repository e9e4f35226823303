#pragma once

#include <stdexcept>
#include <string>

namespace otrimle {

enum class ErrorKind {
  kInvalidInput,
  kDegenerateDensity,
  kSingularMatrix,
  kDegenerateScatter,
  kInfeasiblePartition,
  kInitializationFailure,
  kClusterCollapse,
  kNonFiniteLikelihood,
  kDegenerateVolume,
  kUndefinedCluster,
  kTuningFailure,
  kUnsupportedDistribution,
  kUndefinedCovariance,
  kDimensionMismatch,
  kParse,
};

const char* to_string(ErrorKind kind);

// Every library failure is reported through this type; the kind lets callers
// (the benchmark harness in particular) classify failed replicates.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace otrimle
