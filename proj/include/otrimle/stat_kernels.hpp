#pragma once

#include <Eigen/Dense>

namespace otrimle {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Spectral decomposition with eigenvalues sorted in descending order.
struct EigenDecomp {
  Vector values;
  Matrix vectors;  // columns are eigenvectors, matching `values`

  Matrix reconstruct() const;
};

/// Symmetric eigendecomposition. Rejects inputs whose asymmetry exceeds 1e-8
/// relative to the largest absolute entry.
EigenDecomp sym_eigen(const Matrix& sigma);

/// Cholesky factor of a covariance matrix together with its log determinant.
/// Construct once and evaluate many points; every density and distance helper
/// below goes through this.
class CovFactor {
 public:
  explicit CovFactor(const Matrix& sigma);

  int dim() const { return static_cast<int>(llt_.rows()); }
  double log_det() const { return log_det_; }

  /// (x - mu)' Sigma^{-1} (x - mu) via a triangular solve.
  double mahalanobis_sq(const Vector& x, const Vector& mu) const;

  /// Squared distances of every row of `points` (n x p) to `mu`.
  Vector mahalanobis_sq_rows(const Matrix& points, const Vector& mu) const;

 private:
  Matrix llt_;  // lower-triangular L with L L' = Sigma
  double log_det_ = 0.0;
};

/// Smallest eigenvalue a covariance may have before density evaluation.
inline constexpr double kMinCovEigenvalue = 1e-300;

double gauss_logpdf(const Vector& x, const Vector& mu, const CovFactor& sigma);
double gauss_logpdf(const Vector& x, const Vector& mu, const Matrix& sigma);
double gauss_pdf(const Vector& x, const Vector& mu, const Matrix& sigma);

/// Location/scale multivariate Student-t density.
double t_logpdf(const Vector& x, const Vector& mu, const CovFactor& scale, double nu);
double t_logpdf(const Vector& x, const Vector& mu, const Matrix& scale, double nu);
double t_pdf(const Vector& x, const Vector& mu, const Matrix& scale, double nu);

double mahalanobis_sq(const Vector& x, const Vector& mu, const Matrix& sigma);

/// Regularized lower incomplete gamma P(a, x).
double gamma_p(double a, double x);

/// CDF of the chi-squared law with `dof` degrees of freedom. Accepts +inf.
double chi2_cdf(double t, int dof);

/// Inverse of chi2_cdf; accurate to 1e-10 in probability.
double chi2_quantile(double q, int dof);

/// log(sum(exp(v))) without overflow; returns -inf for an all -inf input.
double log_sum_exp(const double* v, int count);

}  // namespace otrimle
