#pragma once

#include <string>

#include "otrimle/stat_kernels.hpp"

namespace otrimle {

enum class Family { kGaussian, kStudentT, kUniformBox };

const char* to_string(Family f);
Family family_from_string(const std::string& name);

/// One generating component. Elliptical families use `location` and `shape`
/// (covariance for Gaussian, scale matrix for t); the box uses `box_lo`/`box_hi`.
struct ComponentSpec {
  Family family = Family::kGaussian;
  double nu = 3.0;
  double weight = 0.0;
  Vector location;
  Matrix shape;
  Vector box_lo;
  Vector box_hi;

  int dim() const;
};

}  // namespace otrimle
