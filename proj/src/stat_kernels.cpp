#include "otrimle/stat_kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "otrimle/error.hpp"

namespace otrimle {

namespace {

constexpr double kLog2Pi = 1.8378770664093454835606594728112;

void check_finite(const Vector& x) {
  if (!x.allFinite()) throw Error(ErrorKind::kInvalidInput, "non-finite coordinates");
}

// Series expansion of P(a, x), valid for x < a + 1.
double gamma_p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int k = 1; k < 10000; ++k) {
    term *= x / (a + k);
    sum += term;
    if (std::abs(term) < std::abs(sum) * 1e-17) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Continued fraction for Q(a, x) (modified Lentz), valid for x >= a + 1.
double gamma_q_fraction(double a, double x) {
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

double gamma_q(double a, double x) {
  if (x <= 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_fraction(a, x);
}

}  // namespace

Matrix EigenDecomp::reconstruct() const {
  return vectors * values.asDiagonal() * vectors.transpose();
}

EigenDecomp sym_eigen(const Matrix& sigma) {
  if (sigma.rows() != sigma.cols() || sigma.rows() == 0) {
    throw Error(ErrorKind::kInvalidInput, "sym_eigen needs a non-empty square matrix");
  }
  if (!sigma.allFinite()) throw Error(ErrorKind::kInvalidInput, "non-finite matrix entries");
  const double scale = std::max(1.0, sigma.cwiseAbs().maxCoeff());
  if ((sigma - sigma.transpose()).cwiseAbs().maxCoeff() > 1e-8 * scale) {
    throw Error(ErrorKind::kInvalidInput, "matrix is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (sigma + sigma.transpose()));
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::kInvalidInput, "eigendecomposition did not converge");
  }
  // Eigen returns ascending order.
  const auto p = sigma.rows();
  EigenDecomp out{Vector(p), Matrix(p, p)};
  for (Eigen::Index k = 0; k < p; ++k) {
    out.values(k) = solver.eigenvalues()(p - 1 - k);
    out.vectors.col(k) = solver.eigenvectors().col(p - 1 - k);
  }
  return out;
}

CovFactor::CovFactor(const Matrix& sigma) {
  if (sigma.rows() != sigma.cols() || sigma.rows() == 0 || !sigma.allFinite()) {
    throw Error(ErrorKind::kSingularMatrix, "covariance must be a finite square matrix");
  }
  Eigen::LLT<Matrix> llt(sigma);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorKind::kSingularMatrix, "covariance is not positive definite");
  }
  llt_ = llt.matrixL();
  const Vector diag = llt_.diagonal();
  // Cheap necessary check for the eigenvalue floor: L_kk^2 >= lambda_min.
  if ((diag.array() <= 0.0).any() || diag.array().square().minCoeff() < kMinCovEigenvalue) {
    throw Error(ErrorKind::kSingularMatrix, "covariance eigenvalue below 1e-300");
  }
  log_det_ = 2.0 * diag.array().log().sum();
  if (!std::isfinite(log_det_)) throw Error(ErrorKind::kSingularMatrix, "log determinant is not finite");
}

double CovFactor::mahalanobis_sq(const Vector& x, const Vector& mu) const {
  const Vector z = llt_.triangularView<Eigen::Lower>().solve(x - mu);
  return z.squaredNorm();
}

Vector CovFactor::mahalanobis_sq_rows(const Matrix& points, const Vector& mu) const {
  Matrix centered = (points.rowwise() - mu.transpose()).transpose();
  llt_.triangularView<Eigen::Lower>().solveInPlace(centered);
  return centered.colwise().squaredNorm().transpose();
}

double gauss_logpdf(const Vector& x, const Vector& mu, const CovFactor& sigma) {
  check_finite(x);
  const double d = sigma.mahalanobis_sq(x, mu);
  return -0.5 * (sigma.dim() * kLog2Pi + sigma.log_det() + d);
}

double gauss_logpdf(const Vector& x, const Vector& mu, const Matrix& sigma) {
  return gauss_logpdf(x, mu, CovFactor(sigma));
}

double gauss_pdf(const Vector& x, const Vector& mu, const Matrix& sigma) {
  return std::exp(gauss_logpdf(x, mu, sigma));
}

double t_logpdf(const Vector& x, const Vector& mu, const CovFactor& scale, double nu) {
  check_finite(x);
  if (!(nu > 0.0)) throw Error(ErrorKind::kInvalidInput, "degrees of freedom must be positive");
  const double p = scale.dim();
  const double d = scale.mahalanobis_sq(x, mu);
  return std::lgamma(0.5 * (nu + p)) - std::lgamma(0.5 * nu) -
         0.5 * p * std::log(nu * std::numbers::pi) - 0.5 * scale.log_det() -
         0.5 * (nu + p) * std::log1p(d / nu);
}

double t_logpdf(const Vector& x, const Vector& mu, const Matrix& scale, double nu) {
  return t_logpdf(x, mu, CovFactor(scale), nu);
}

double t_pdf(const Vector& x, const Vector& mu, const Matrix& scale, double nu) {
  return std::exp(t_logpdf(x, mu, scale, nu));
}

double mahalanobis_sq(const Vector& x, const Vector& mu, const Matrix& sigma) {
  check_finite(x);
  return CovFactor(sigma).mahalanobis_sq(x, mu);
}

double gamma_p(double a, double x) {
  if (!(a > 0.0) || std::isnan(x) || x < 0.0) {
    throw Error(ErrorKind::kInvalidInput, "gamma_p needs a > 0 and x >= 0");
  }
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  if (x < a + 1.0) return gamma_p_series(a, x);
  return 1.0 - gamma_q_fraction(a, x);
}

double chi2_cdf(double t, int dof) {
  if (dof < 1) throw Error(ErrorKind::kInvalidInput, "chi2 needs dof >= 1");
  if (std::isnan(t) || t < 0.0) throw Error(ErrorKind::kInvalidInput, "chi2_cdf needs t >= 0");
  return gamma_p(0.5 * dof, 0.5 * t);
}

double chi2_quantile(double q, int dof) {
  if (dof < 1) throw Error(ErrorKind::kInvalidInput, "chi2 needs dof >= 1");
  if (!(q > 0.0 && q < 1.0)) throw Error(ErrorKind::kInvalidInput, "chi2_quantile needs q in (0,1)");
  const double a = 0.5 * dof;
  // Work with whichever tail keeps precision.
  const bool upper = q > 0.5;
  const double target = upper ? 1.0 - q : q;
  auto excess = [&](double x) {
    return upper ? target - gamma_q(a, 0.5 * x) : gamma_p(a, 0.5 * x) - target;
  };
  double lo = 0.0;
  double hi = std::max(1.0, static_cast<double>(dof));
  while (excess(hi) < 0.0) {
    lo = hi;
    hi *= 2.0;
  }
  for (int it = 0; it < 2000 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (excess(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double log_sum_exp(const double* v, int count) {
  double top = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < count; ++k) top = std::max(top, v[k]);
  if (std::isinf(top)) return top;
  double s = 0.0;
  for (int k = 0; k < count; ++k) s += std::exp(v[k] - top);
  return top + std::log(s);
}

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidInput: return "invalid input";
    case ErrorKind::kDegenerateDensity: return "degenerate density";
    case ErrorKind::kSingularMatrix: return "singular matrix";
    case ErrorKind::kDegenerateScatter: return "degenerate scatter";
    case ErrorKind::kInfeasiblePartition: return "infeasible partition";
    case ErrorKind::kInitializationFailure: return "initialization failure";
    case ErrorKind::kClusterCollapse: return "cluster collapse";
    case ErrorKind::kNonFiniteLikelihood: return "non-finite likelihood";
    case ErrorKind::kDegenerateVolume: return "degenerate volume";
    case ErrorKind::kUndefinedCluster: return "undefined cluster";
    case ErrorKind::kTuningFailure: return "tuning failure";
    case ErrorKind::kUnsupportedDistribution: return "unsupported distribution";
    case ErrorKind::kUndefinedCovariance: return "undefined covariance";
    case ErrorKind::kDimensionMismatch: return "dimension mismatch";
    case ErrorKind::kParse: return "parse error";
  }
  return "error";
}

}  // namespace otrimle
