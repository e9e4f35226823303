#include "otrimle/init.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "otrimle/error.hpp"

namespace otrimle {

namespace {

constexpr int kNoiseEmIterations = 50;
// Minimum feature/clutter intensity ratio for the clutter component to count,
// per two dimensions: the density of a Gaussian cluster itself spreads over a
// range of intensities that widens with the dimension.
constexpr double kClutterRateRatio = 10.0;
// Ridge added to every cluster covariance during agglomeration, as a share of
// the average variance. Without a sizeable ridge, clusters of fewer than p + 1
// points are ranked by their size rather than their geometry.
constexpr double kMergeRegularization = 0.1;

Dataset subset(const Dataset& data, const std::vector<int>& rows) {
  Matrix m(rows.size(), data.p());
  for (std::size_t r = 0; r < rows.size(); ++r) m.row(r) = data.points().row(rows[r]);
  return Dataset(std::move(m));
}

double total_scatter_trace(const Matrix& x) {
  const Vector mean = x.colwise().mean();
  return (x.rowwise() - mean.transpose()).squaredNorm() / x.rows();
}

// Sufficient statistics of a cluster: count, sum and cross-product.
struct ClusterStats {
  double n = 0.0;
  Vector sum;
  Matrix cross;

  void merge(const ClusterStats& o) {
    n += o.n;
    sum += o.sum;
    cross += o.cross;
  }
};

// n log det(W/n + r I), the classification-likelihood cost of one cluster.
double cluster_criterion(const ClusterStats& c, double reg) {
  Matrix w = c.cross / c.n - (c.sum / c.n) * (c.sum / c.n).transpose();
  w.diagonal().array() += reg;
  Eigen::LLT<Matrix> llt(0.5 * (w + w.transpose()));
  double logdet = 0.0;
  if (llt.info() == Eigen::Success) {
    logdet = 2.0 * Matrix(llt.matrixL()).diagonal().array().log().sum();
  } else {
    // Rounding pushed the scatter just below zero; fall back to eigenvalues.
    Eigen::SelfAdjointEigenSolver<Matrix> es(w);
    logdet = es.eigenvalues().cwiseMax(reg).array().log().sum();
  }
  return c.n * logdet;
}

struct GammaMixFit {
  double w_clutter = 0.0;
  double rate_feature = 0.0;
  double rate_clutter = 0.0;
  double loglik2 = 0.0;
  double loglik1 = 0.0;
};

double gamma_logpdf(double log_y, double y, double k, double rate) {
  return k * std::log(rate) + (k - 1.0) * log_y - rate * y - std::lgamma(k);
}

}  // namespace

void InitConfig::validate() const {
  if (g < 1) throw Error(ErrorKind::kInvalidInput, "g must be >= 1");
  if (knn_k < 1) throw Error(ErrorKind::kInvalidInput, "knn_k must be >= 1");
  if (!(min_pr > 0.0 && min_pr < 1.0)) throw Error(ErrorKind::kInvalidInput, "min_pr must lie in (0,1)");
}

int count_distinct(const Dataset& data) {
  std::set<std::vector<double>> rows;
  for (int i = 0; i < data.n(); ++i) {
    const Vector r = data.row(i);
    rows.emplace(r.data(), r.data() + r.size());
  }
  return static_cast<int>(rows.size());
}

std::vector<double> kth_neighbor_distances(const Dataset& data, int k) {
  const int n = data.n();
  if (k < 1 || k >= n) throw Error(ErrorKind::kInvalidInput, "need 1 <= k < n for neighbour distances");
  const Matrix& x = data.points();
  const Vector sq = x.rowwise().squaredNorm();
  std::vector<double> out(n);
  std::vector<double> row(n - 1);
  for (int i = 0; i < n; ++i) {
    const Vector dots = x * x.row(i).transpose();
    int c = 0;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      row[c++] = std::max(0.0, sq(i) + sq(j) - 2.0 * dots(j));
    }
    std::nth_element(row.begin(), row.begin() + (k - 1), row.end());
    out[i] = std::sqrt(row[k - 1]);
  }
  return out;
}

std::vector<bool> nn_noise_detect(const Dataset& data, int knn_k) {
  const int n = data.n();
  if (knn_k < 1) throw Error(ErrorKind::kInvalidInput, "knn_k must be >= 1");
  if (n <= knn_k) throw Error(ErrorKind::kInvalidInput, "nn_noise_detect needs n > knn_k");
  std::vector<bool> flags(n, false);
  const std::vector<double> dist = kth_neighbor_distances(data, knn_k);

  std::vector<double> positive;
  for (double d : dist)
    if (d > 0.0) positive.push_back(d);
  if (positive.size() < 2) return flags;
  std::vector<double> sorted = positive;
  std::sort(sorted.begin(), sorted.end());
  const double scale = sorted[sorted.size() / 2];
  const double floor_d = 0.5 * sorted.front();

  // y = (d/scale)^p follows Gamma(k, rate) under a homogeneous Poisson process.
  const double p = data.p();
  const double k = knn_k;
  std::vector<double> log_y(n);
  std::vector<double> y(n);
  for (int i = 0; i < n; ++i) {
    log_y[i] = p * std::log(std::max(dist[i], floor_d) / scale);
    y[i] = std::exp(log_y[i]);
  }

  GammaMixFit fit;
  {
    double ysum = 0.0;
    for (double v : y) ysum += v;
    const double rate = k * n / ysum;
    for (int i = 0; i < n; ++i) fit.loglik1 += gamma_logpdf(log_y[i], y[i], k, rate);
  }
  std::vector<double> ys = y;
  std::sort(ys.begin(), ys.end());
  const int cut = std::max(1, static_cast<int>(0.9 * n));
  fit.rate_feature = k * cut / std::accumulate(ys.begin(), ys.begin() + cut, 0.0);
  fit.rate_clutter = k * (n - cut) / std::max(std::accumulate(ys.begin() + cut, ys.end(), 0.0), 1e-300);
  fit.w_clutter = 0.1;
  std::vector<double> post(n, 0.0);
  for (int it = 0; it <= kNoiseEmIterations; ++it) {
    double ll = 0.0;
    double r_sum = 0.0;
    double ry_sum = 0.0;
    double f_sum = 0.0;
    double fy_sum = 0.0;
    for (int i = 0; i < n; ++i) {
      const double a = std::log(fit.w_clutter) + gamma_logpdf(log_y[i], y[i], k, fit.rate_clutter);
      const double b = std::log1p(-fit.w_clutter) + gamma_logpdf(log_y[i], y[i], k, fit.rate_feature);
      const double top = std::max(a, b);
      const double lse = top + std::log(std::exp(a - top) + std::exp(b - top));
      ll += lse;
      post[i] = std::exp(a - lse);
      r_sum += post[i];
      ry_sum += post[i] * y[i];
      f_sum += 1.0 - post[i];
      fy_sum += (1.0 - post[i]) * y[i];
    }
    fit.loglik2 = ll;
    if (it == kNoiseEmIterations) break;
    if (r_sum <= 1e-12 || f_sum <= 1e-12 || ry_sum <= 0.0 || fy_sum <= 0.0) break;
    fit.w_clutter = std::clamp(r_sum / n, 1e-12, 1.0 - 1e-12);
    fit.rate_clutter = k * r_sum / ry_sum;
    fit.rate_feature = k * f_sum / fy_sum;
  }

  if (fit.rate_clutter > fit.rate_feature) return flags;  // labels swapped: no clutter
  // Accept the clutter component only when it beats the single-intensity
  // model by BIC and is markedly sparser than the feature component.
  const double bic_gain = 2.0 * (fit.loglik2 - fit.loglik1) - 2.0 * std::log(static_cast<double>(n));
  const double min_ratio = kClutterRateRatio * std::max(1.0, 0.5 * p);
  if (bic_gain <= 0.0 || fit.rate_feature < min_ratio * fit.rate_clutter) return flags;
  for (int i = 0; i < n; ++i) flags[i] = post[i] > 0.5;
  return flags;
}

Labeling mbhc_agglomerate(const Dataset& data, int g) {
  const int n = data.n();
  const int p = data.p();
  if (g < 1) throw Error(ErrorKind::kInvalidInput, "g must be >= 1");
  if (count_distinct(data) < g) {
    throw Error(ErrorKind::kInfeasiblePartition, "fewer than " + std::to_string(g) + " distinct points");
  }
  if (g == 1) return Labeling(n, 1);

  const Matrix x = data.points().rowwise() - data.points().colwise().mean();
  double reg = kMergeRegularization * total_scatter_trace(x) / p;
  if (reg <= 0.0) reg = 1e-300;
  const double single = p * std::log(reg);  // criterion of one point: 1 * log det(r I)

  std::vector<ClusterStats> stats(n);
  for (int i = 0; i < n; ++i) {
    stats[i].n = 1.0;
    stats[i].sum = x.row(i).transpose();
    stats[i].cross = stats[i].sum * stats[i].sum.transpose();
  }
  std::vector<double> crit(n, single);
  std::vector<bool> alive(n, true);
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);

  // Pair costs between singletons have a closed form:
  // 2 log det(v v'/4 + r I) - 2 p log r = 2 log(1 + |v|^2 / (4 r)).
  Matrix cost(n, n);
  const Vector sq = x.rowwise().squaredNorm();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double v2 = std::max(0.0, sq(i) + sq(j) - 2.0 * x.row(i).dot(x.row(j)));
      cost(i, j) = cost(j, i) = 2.0 * std::log1p(v2 / (4.0 * reg));
    }
    cost(i, i) = std::numeric_limits<double>::infinity();
  }
  std::vector<int> nearest(n, -1);
  std::vector<double> nearest_cost(n, std::numeric_limits<double>::infinity());
  auto rescan = [&](int i) {
    nearest[i] = -1;
    nearest_cost[i] = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j) {
      if (j == i || !alive[j]) continue;
      if (cost(i, j) < nearest_cost[i]) {
        nearest_cost[i] = cost(i, j);
        nearest[i] = j;
      }
    }
  };
  for (int i = 0; i < n; ++i) rescan(i);

  for (int clusters = n; clusters > g; --clusters) {
    int a = -1;
    for (int i = 0; i < n; ++i) {
      if (alive[i] && nearest[i] >= 0 && (a < 0 || nearest_cost[i] < nearest_cost[a])) a = i;
    }
    int b = nearest[a];
    if (b < a) std::swap(a, b);
    stats[a].merge(stats[b]);
    crit[a] = cluster_criterion(stats[a], reg);
    alive[b] = false;
    parent[b] = a;
    for (int k = 0; k < n; ++k) {
      if (!alive[k] || k == a) continue;
      ClusterStats merged = stats[a];
      merged.merge(stats[k]);
      cost(a, k) = cost(k, a) = cluster_criterion(merged, reg) - crit[a] - crit[k];
    }
    rescan(a);
    for (int k = 0; k < n; ++k) {
      if (!alive[k] || k == a) continue;
      if (nearest[k] == a || nearest[k] == b) {
        rescan(k);
      } else if (cost(k, a) < nearest_cost[k] || (cost(k, a) == nearest_cost[k] && a < nearest[k])) {
        nearest[k] = a;
        nearest_cost[k] = cost(k, a);
      }
    }
  }

  auto root = [&](int i) {
    while (parent[i] != i) i = parent[i];
    return i;
  };
  // Number clusters by first appearance for a deterministic labelling.
  std::vector<int> id(n, 0);
  int next = 0;
  Labeling labels(n);
  for (int i = 0; i < n; ++i) {
    const int r = root(i);
    if (id[r] == 0) id[r] = ++next;
    labels[i] = id[r];
  }
  return labels;
}

namespace {

std::vector<int> cluster_sizes(const Labeling& labels, int g) {
  std::vector<int> sizes(g + 1, 0);
  for (int l : labels) ++sizes[l];
  return sizes;
}

}  // namespace

Labeling initial_partition(const Dataset& data, const InitConfig& cfg) {
  cfg.validate();
  const int n = data.n();
  const int g = cfg.g;
  const int min_size = static_cast<int>(std::ceil(cfg.min_pr * n - 1e-9));
  if (cfg.min_pr * n > static_cast<double>(n) / g) {
    throw Error(ErrorKind::kInitializationFailure, "min_pr * n exceeds n / g");
  }
  if (n <= g + min_size) throw Error(ErrorKind::kInitializationFailure, "too few observations for g clusters");

  std::vector<bool> noise(n, false);
  if (n > cfg.knn_k) noise = nn_noise_detect(data, cfg.knn_k);
  std::vector<int> keep;
  for (int i = 0; i < n; ++i)
    if (!noise[i]) keep.push_back(i);
  if (static_cast<int>(keep.size()) < std::max(g * min_size, g) || static_cast<int>(keep.size()) * 2 < n) {
    // The noise guess swallowed too much; cluster everything instead.
    keep.resize(n);
    std::iota(keep.begin(), keep.end(), 0);
    std::fill(noise.begin(), noise.end(), false);
  }

  const Dataset core = subset(data, keep);
  const Labeling core_labels = mbhc_agglomerate(core, g);
  Labeling labels(n, 0);
  for (std::size_t r = 0; r < keep.size(); ++r) labels[keep[r]] = core_labels[r];

  const double reg = std::max(1e-8 * total_scatter_trace(data.points()) / data.p(), 1e-300);
  for (int attempt = 0; attempt <= cfg.max_repairs; ++attempt) {
    std::vector<int> sizes = cluster_sizes(labels, g);
    int smallest = 1;
    for (int j = 2; j <= g; ++j)
      if (sizes[j] < sizes[smallest]) smallest = j;
    if (sizes[smallest] >= min_size) return labels;
    if (attempt == cfg.max_repairs) break;

    // Move the smallest cluster's points to the nearest other cluster.
    std::vector<Vector> means(g + 1);
    std::vector<CovFactor> covs;
    covs.reserve(g + 1);
    for (int j = 0; j <= g; ++j) {
      Matrix s = Matrix::Identity(data.p(), data.p()) * reg;
      Vector m = Vector::Zero(data.p());
      if (j >= 1 && sizes[j] > 0) {
        for (int i = 0; i < n; ++i)
          if (labels[i] == j) m += data.row(i);
        m /= sizes[j];
        for (int i = 0; i < n; ++i) {
          if (labels[i] != j) continue;
          const Vector d = data.row(i) - m;
          s += d * d.transpose() / sizes[j];
        }
      }
      means[j] = m;
      covs.emplace_back(s);
    }
    for (int i = 0; i < n; ++i) {
      if (labels[i] != smallest) continue;
      int best = -1;
      double best_d = std::numeric_limits<double>::infinity();
      for (int j = 1; j <= g; ++j) {
        if (j == smallest || sizes[j] == 0) continue;
        const double d = covs[j].mahalanobis_sq(data.row(i), means[j]);
        if (d < best_d) {
          best_d = d;
          best = j;
        }
      }
      if (best < 0) throw Error(ErrorKind::kInitializationFailure, "no cluster left to absorb points");
      labels[i] = best;
    }
    sizes = cluster_sizes(labels, g);

    // Re-split the largest cluster into two, reusing the freed label.
    int largest = 1;
    for (int j = 2; j <= g; ++j)
      if (sizes[j] > sizes[largest]) largest = j;
    std::vector<int> members;
    for (int i = 0; i < n; ++i)
      if (labels[i] == largest) members.push_back(i);
    if (count_distinct(subset(data, members)) < 2) break;
    const Labeling halves = mbhc_agglomerate(subset(data, members), 2);
    for (std::size_t r = 0; r < members.size(); ++r) {
      if (halves[r] == 2) labels[members[r]] = smallest;
    }
  }
  throw Error(ErrorKind::kInitializationFailure,
              "no partition with clusters of at least " + std::to_string(min_size) + " points");
}

}  // namespace otrimle
