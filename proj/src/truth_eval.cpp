#include "otrimle/truth_eval.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <random>
#include <string>
#include <tuple>

#include "otrimle/error.hpp"

namespace otrimle {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double simpson_step(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb,
                    double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-13) {
  // Split into panels first so narrow peaks are not missed by the first probe.
  constexpr int kPanels = 64;
  double total = 0.0;
  for (int k = 0; k < kPanels; ++k) {
    const double lo = a + (b - a) * k / kPanels;
    const double hi = a + (b - a) * (k + 1) / kPanels;
    const double flo = f(lo);
    const double fhi = f(hi);
    const double fm = f(0.5 * (lo + hi));
    const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fm + fhi);
    total += simpson_step(f, lo, hi, flo, fm, fhi, whole, tol / kPanels, 40);
  }
  return total;
}

// Density of the radius R = |Z| for the spherical version of a family.
std::function<double(double)> radius_density(Family family, double nu, int p) {
  if (family == Family::kStudentT) {
    const double log_c = std::log(2.0) + std::lgamma(0.5 * (nu + p)) - std::lgamma(0.5 * nu) -
                         std::lgamma(0.5 * p) - 0.5 * p * std::log(nu);
    return [=](double r) {
      if (r <= 0.0) return p == 1 ? std::exp(log_c) : 0.0;
      return std::exp(log_c + (p - 1) * std::log(r) - 0.5 * (nu + p) * std::log1p(r * r / nu));
    };
  }
  const double log_c = std::log(2.0) - (0.5 * p - 1.0) * std::log(2.0) - std::lgamma(0.5 * p);
  return [=](double r) {
    if (r <= 0.0) return p == 1 ? std::exp(log_c) : 0.0;
    return std::exp(log_c + (p - 1) * std::log(r) - 0.5 * r * r);
  };
}

double radial_factor_by_quadrature(Family family, double nu, int p) {
  const auto dens = radius_density(family, nu, p);
  // Radius median: the MCD half-sample is the ball holding half the mass.
  double lo = 0.0;
  double hi = 1.0;
  while (integrate(dens, 0.0, hi, 1e-14) < 0.5) hi *= 2.0;
  for (int it = 0; it < 100 && hi - lo > 1e-14 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (integrate(dens, 0.0, mid, 1e-14) < 0.5) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double r_med = 0.5 * (lo + hi);
  const double partial = integrate([&](double r) { return r * r * dens(r); }, 0.0, r_med, 1e-14);
  // Raw scatter is E[R^2; R <= r_med] / (p * 0.5) times the shape.
  return partial / (0.5 * p) * mcd_gaussian_consistency(p);
}

Matrix subset_cov(const Matrix& x, const std::vector<int>& rows, Vector& mean) {
  mean = Vector::Zero(x.cols());
  for (int r : rows) mean += x.row(r).transpose();
  mean /= static_cast<double>(rows.size());
  Matrix cov = Matrix::Zero(x.cols(), x.cols());
  for (int r : rows) {
    const Vector d = x.row(r).transpose() - mean;
    cov += d * d.transpose();
  }
  return cov / static_cast<double>(rows.size());
}

}  // namespace

void TruthParams::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorKind::kInvalidInput, "alpha must lie in (0,1)");
  if (triples.empty()) throw Error(ErrorKind::kInvalidInput, "truth needs at least one cluster");
  double total = 0.0;
  for (const auto& t : triples) {
    if (t.pi < 0.0) throw Error(ErrorKind::kInvalidInput, "negative cluster proportion");
    total += t.pi;
  }
  if (total > 1.0 + 1e-12) throw Error(ErrorKind::kInvalidInput, "cluster proportions exceed 1");
}

double mcd_gaussian_consistency(int p) {
  const double q = chi2_quantile(0.5, p);
  return 0.5 / chi2_cdf(q, p + 2);
}

double mcd_radial_factor(Family family, double nu, int p) {
  if (p < 1) throw Error(ErrorKind::kInvalidInput, "dimension must be >= 1");
  if (family == Family::kGaussian) return 1.0;
  if (family != Family::kStudentT) throw Error(ErrorKind::kUnsupportedDistribution, "MCD factor needs an elliptical family");
  if (!(nu > 0.0)) throw Error(ErrorKind::kInvalidInput, "nu must be positive");
  static std::mutex mutex;
  static std::map<std::tuple<int, double, int>, double> cache;
  const auto key = std::make_tuple(static_cast<int>(family), nu, p);
  {
    std::lock_guard<std::mutex> lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  const double c = radial_factor_by_quadrature(family, nu, p);
  std::lock_guard<std::mutex> lock(mutex);
  cache.emplace(key, c);
  return c;
}

CenterScatter mcd_functional(const ComponentSpec& component) {
  if (component.family == Family::kUniformBox) {
    throw Error(ErrorKind::kUnsupportedDistribution, "the MCD functional is only defined here for elliptical families");
  }
  const double c = mcd_radial_factor(component.family, component.nu, component.dim());
  if (component.family == Family::kGaussian) return {component.location, component.shape};
  return {component.location, c * component.shape};
}

CenterScatter mcd_subset_search(const Matrix& points, std::uint64_t seed, int starts) {
  const int n = static_cast<int>(points.rows());
  const int p = static_cast<int>(points.cols());
  const int h = n / 2;
  if (h <= p) throw Error(ErrorKind::kInvalidInput, "too few points for a subset search");
  std::mt19937_64 rng(seed);

  std::vector<int> idx(n);
  std::vector<double> dist(n);
  auto concentrate = [&](std::vector<int> rows, Vector& mean, Matrix& cov) {
    double best_det = kInf;
    for (int step = 0; step < 200; ++step) {
      cov = subset_cov(points, rows, mean);
      Eigen::LLT<Matrix> llt(cov);
      if (llt.info() != Eigen::Success) return kInf;
      const double logdet = 2.0 * Matrix(llt.matrixL()).diagonal().array().log().sum();
      if (logdet >= best_det - 1e-12) return logdet;
      best_det = logdet;
      const CovFactor f(cov);
      const Vector d = f.mahalanobis_sq_rows(points, mean);
      std::iota(idx.begin(), idx.end(), 0);
      std::nth_element(idx.begin(), idx.begin() + h, idx.end(), [&](int a, int b) { return d(a) < d(b); });
      rows.assign(idx.begin(), idx.begin() + h);
    }
    return best_det;
  };

  double best = kInf;
  CenterScatter out;
  for (int s = 0; s < starts; ++s) {
    std::vector<int> rows;
    if (s == 0) {
      // Points closest to the coordinatewise median.
      Vector med(p);
      for (int k = 0; k < p; ++k) {
        std::vector<double> col(points.col(k).data(), points.col(k).data() + n);
        std::nth_element(col.begin(), col.begin() + n / 2, col.end());
        med(k) = col[n / 2];
      }
      for (int i = 0; i < n; ++i) dist[i] = (points.row(i).transpose() - med).squaredNorm();
      std::iota(idx.begin(), idx.end(), 0);
      std::nth_element(idx.begin(), idx.begin() + h, idx.end(), [&](int a, int b) { return dist[a] < dist[b]; });
      rows.assign(idx.begin(), idx.begin() + h);
    } else {
      std::uniform_int_distribution<int> pick(0, n - 1);
      for (int k = 0; k < 10 * (p + 1); ++k) rows.push_back(pick(rng));
    }
    Vector mean;
    Matrix cov;
    const double logdet = concentrate(rows, mean, cov);
    if (logdet < best) {
      best = logdet;
      out.center = mean;
      out.scatter = cov;
    }
  }
  if (!std::isfinite(best)) throw Error(ErrorKind::kSingularMatrix, "no non-singular subset found");
  out.scatter *= mcd_gaussian_consistency(p);
  return out;
}

double qs_score(const Vector& y, const ClusterTriple& triple) {
  if (triple.pi <= 0.0) return -kInf;
  const CovFactor f(triple.scatter);
  return std::log(triple.pi) - 0.5 * f.log_det() - 0.5 * f.mahalanobis_sq(y, triple.center);
}

Labeling agr_labels(const Dataset& data, const TruthParams& truth) {
  truth.validate();
  const int n = data.n();
  const int g = static_cast<int>(truth.triples.size());
  const double radius = chi2_quantile(1.0 - truth.alpha, data.p());
  Matrix dist(n, g);
  Matrix score(n, g);
  for (int j = 0; j < g; ++j) {
    const ClusterTriple& t = truth.triples[j];
    if (t.center.size() != data.p()) throw Error(ErrorKind::kDimensionMismatch, "truth and data dimensions differ");
    const CovFactor f(t.scatter);
    dist.col(j) = f.mahalanobis_sq_rows(data.points(), t.center);
    const double base = t.pi > 0.0 ? std::log(t.pi) - 0.5 * f.log_det() : -kInf;
    score.col(j) = (base - 0.5 * dist.col(j).array()).matrix();
  }
  Labeling labels(n, 0);
  for (int i = 0; i < n; ++i) {
    bool inside = false;
    for (int j = 0; j < g && !inside; ++j) inside = dist(i, j) <= radius;
    if (!inside) continue;
    int best = 0;
    for (int j = 1; j < g; ++j)
      if (score(i, j) > score(i, best)) best = j;
    labels[i] = best + 1;
  }
  return labels;
}

int agr_label(const Vector& y, const TruthParams& truth) {
  Matrix row(1, y.size());
  row.row(0) = y.transpose();
  return agr_labels(Dataset(row), truth).front();
}

namespace {

Eigen::MatrixXi confusion(const Labeling& truth, const Labeling& estimate, int g) {
  if (truth.size() != estimate.size()) throw Error(ErrorKind::kDimensionMismatch, "labelings differ in length");
  if (truth.empty()) throw Error(ErrorKind::kInvalidInput, "empty labelings");
  if (g < 1) throw Error(ErrorKind::kInvalidInput, "g must be >= 1");
  Eigen::MatrixXi c = Eigen::MatrixXi::Zero(g + 1, g + 1);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] < 0 || truth[i] > g || estimate[i] < 0 || estimate[i] > g) {
      throw Error(ErrorKind::kInvalidInput, "label out of range at position " + std::to_string(i + 1));
    }
    ++c(truth[i], estimate[i]);
  }
  return c;
}

// Maximum-weight perfect matching on a square matrix (Kuhn-Munkres with
// potentials, run on negated weights).
long long max_assignment(const Eigen::MatrixXi& w) {
  const int m = static_cast<int>(w.rows());
  const long long big = std::numeric_limits<long long>::max() / 4;
  std::vector<long long> u(m + 1, 0), v(m + 1, 0);
  std::vector<int> match(m + 1, 0), way(m + 1, 0);
  for (int i = 1; i <= m; ++i) {
    match[0] = i;
    int j0 = 0;
    std::vector<long long> minv(m + 1, big);
    std::vector<bool> used(m + 1, false);
    do {
      used[j0] = true;
      const int i0 = match[j0];
      long long delta = big;
      int j1 = 0;
      for (int j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const long long cur = -static_cast<long long>(w(i0 - 1, j - 1)) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= m; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const int j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  long long total = 0;
  for (int j = 1; j <= m; ++j) total += w(match[j] - 1, j - 1);
  return total;
}

}  // namespace

double mcr_exhaustive(const Labeling& truth, const Labeling& estimate, int g) {
  const Eigen::MatrixXi c = confusion(truth, estimate, g);
  std::vector<int> perm(g);
  std::iota(perm.begin(), perm.end(), 1);
  long long best = -1;
  do {
    // perm[e - 1] is the true label that estimated label e maps to.
    long long agree = c(0, 0);
    for (int e = 1; e <= g; ++e) agree += c(perm[e - 1], e);
    best = std::max(best, agree);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return 1.0 - static_cast<double>(best) / static_cast<double>(truth.size());
}

double mcr_assignment(const Labeling& truth, const Labeling& estimate, int g) {
  const Eigen::MatrixXi c = confusion(truth, estimate, g);
  const long long agree = c(0, 0) + max_assignment(c.bottomRightCorner(g, g));
  return 1.0 - static_cast<double>(agree) / static_cast<double>(truth.size());
}

double mcr(const Labeling& truth, const Labeling& estimate, int g) {
  return g <= 8 ? mcr_exhaustive(truth, estimate, g) : mcr_assignment(truth, estimate, g);
}

}  // namespace otrimle
