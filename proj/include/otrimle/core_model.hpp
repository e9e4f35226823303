#pragma once

#include <vector>

#include "otrimle/stat_kernels.hpp"

namespace otrimle {

/// n x p sample, one observation per row.
class Dataset {
 public:
  Dataset() = default;
  explicit Dataset(Matrix points);

  const Matrix& points() const { return points_; }
  Vector row(Eigen::Index i) const { return points_.row(i).transpose(); }
  int n() const { return static_cast<int>(points_.rows()); }
  int p() const { return static_cast<int>(points_.cols()); }

 private:
  Matrix points_;
};

/// Mixture parameters plus the improper constant density level.
/// delta == 0 is plain Gaussian-mixture mode.
struct MixtureParams {
  double pi0 = 0.0;
  Vector pi;                  // G cluster proportions
  std::vector<Vector> mu;     // G means
  std::vector<Matrix> sigma;  // G covariances
  double delta = 0.0;

  int g() const { return static_cast<int>(pi.size()); }
  int p() const { return mu.empty() ? 0 : static_cast<int>(mu.front().size()); }

  /// Throws kInvalidInput when a structural invariant fails.
  void validate() const;
};

/// n x (G+1) responsibilities; column 0 is the noise component.
struct PseudoPosteriors {
  Matrix tau;

  int n() const { return static_cast<int>(tau.rows()); }
  int g() const { return static_cast<int>(tau.cols()) - 1; }
};

/// Per-point labels in {0, ..., G}; 0 is noise.
using Labeling = std::vector<int>;

double log_improper_density(const Vector& x, const MixtureParams& theta);
double improper_density(const Vector& x, const MixtureParams& theta);

/// Sample mean of log improper densities.
double pseudo_loglik(const Dataset& data, const MixtureParams& theta);

PseudoPosteriors posteriors(const Dataset& data, const MixtureParams& theta);

/// argmax of each row; ties go to the smallest index.
Labeling assign(const PseudoPosteriors& tau);

/// n x (G+1) matrix of log weighted terms: column 0 is log(pi0 * delta),
/// column j is log(pi_j) + log phi(x_i; mu_j, Sigma_j).
Matrix log_component_terms(const Dataset& data, const MixtureParams& theta);

/// E-step output: responsibilities and the pseudo-log-likelihood at theta.
struct EStep {
  PseudoPosteriors tau;
  double loglik = 0.0;
};

/// One pass over the data producing both posteriors and l_n(theta).
EStep expectation(const Dataset& data, const MixtureParams& theta);

}  // namespace otrimle
