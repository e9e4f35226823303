#pragma once

#include <cstdint>
#include <vector>

#include "otrimle/comparators.hpp"
#include "otrimle/core_model.hpp"
#include "otrimle/distributions.hpp"

namespace otrimle {

inline constexpr double kDefaultTruthAlpha = 1e-4;

struct TruthParams {
  double alpha = kDefaultTruthAlpha;
  std::vector<ClusterTriple> triples;

  void validate() const;
};

struct CenterScatter {
  Vector center;
  Matrix scatter;
};

/// Gaussian-consistent MCD scatter factor (h = n/2) of a spherical radial law:
/// the MCD functional of an elliptical law with shape Sigma is c * Sigma.
/// Exactly 1 for the Gaussian. Computed by 1-D quadrature and cached.
double mcd_radial_factor(Family family, double nu, int p);

/// Consistency factor that makes the raw half-sample MCD scatter unbiased at
/// the Gaussian: 0.5 / F_{chi2, p+2}(chi2_p quantile 0.5).
double mcd_gaussian_consistency(int p);

/// MCD centre and scatter functional of an elliptical component.
CenterScatter mcd_functional(const ComponentSpec& component);

/// Sample MCD by concentration steps from several starts, scaled by the
/// Gaussian consistency factor. Used to cross-check mcd_functional.
CenterScatter mcd_subset_search(const Matrix& points, std::uint64_t seed, int starts = 6);

/// log pi - log det(S)/2 - (y-m)' S^{-1} (y-m) / 2; -inf when pi == 0.
double qs_score(const Vector& y, const ClusterTriple& triple);

/// 0 when y lies outside every chi2_p(1-alpha) ellipsoid, otherwise the
/// cluster with the highest qs score (ties to the lowest index).
int agr_label(const Vector& y, const TruthParams& truth);
Labeling agr_labels(const Dataset& data, const TruthParams& truth);

/// Misclassification rate under the best permutation of cluster labels;
/// noise label 0 is never permuted. Exhaustive for g <= 8, Hungarian above.
double mcr(const Labeling& truth, const Labeling& estimate, int g);
double mcr_exhaustive(const Labeling& truth, const Labeling& estimate, int g);
double mcr_assignment(const Labeling& truth, const Labeling& estimate, int g);

}  // namespace otrimle
