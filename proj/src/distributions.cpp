#include "otrimle/distributions.hpp"

#include "otrimle/error.hpp"

namespace otrimle {

const char* to_string(Family f) {
  switch (f) {
    case Family::kGaussian:
      return "gaussian";
    case Family::kStudentT:
      return "t";
    case Family::kUniformBox:
      return "uniform";
  }
  return "unknown";
}

Family family_from_string(const std::string& name) {
  if (name == "gaussian") return Family::kGaussian;
  if (name == "t") return Family::kStudentT;
  if (name == "uniform") return Family::kUniformBox;
  throw Error(ErrorKind::kUnsupportedDistribution, "unknown distribution family '" + name + "'");
}

int ComponentSpec::dim() const {
  if (family == Family::kUniformBox) return static_cast<int>(box_lo.size());
  return static_cast<int>(location.size());
}

}  // namespace otrimle
