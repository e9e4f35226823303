#include "otrimle/tune.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>

#include "otrimle/error.hpp"

namespace otrimle {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLog2Pi = 1.8378770664093454835606594728112;

double finite_or_inf(double v) { return std::isfinite(v) ? v : kInf; }

}  // namespace

void TuneConfig::validate() const {
  if (!(beta >= 0.0)) throw Error(ErrorKind::kInvalidInput, "beta must be >= 0");
  if (!(delta_floor > 0.0)) throw Error(ErrorKind::kInvalidInput, "delta_floor must be > 0");
  if (max_evals < 1) throw Error(ErrorKind::kInvalidInput, "max_evals must be >= 1");
  if (grid_points < 2) throw Error(ErrorKind::kInvalidInput, "grid_points must be >= 2");
  if (!(gs_tol > 0.0)) throw Error(ErrorKind::kInvalidInput, "gs_tol must be > 0");
}

double weighted_kolmogorov(std::span<const double> distances, std::span<const double> weights, int p) {
  if (distances.size() != weights.size()) throw Error(ErrorKind::kDimensionMismatch, "one weight per distance required");
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(total > 0.0)) throw Error(ErrorKind::kUndefinedCluster, "cluster has zero total weight");
  std::vector<std::size_t> order(distances.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return distances[a] < distances[b]; });
  double cum = 0.0;
  double sup = 0.0;
  for (std::size_t r = 0; r < order.size();) {
    // M is right-continuous: absorb every tie before comparing.
    const double d = distances[order[r]];
    std::size_t s = r;
    while (s < order.size() && distances[order[s]] == d) cum += weights[order[s++]];
    const double m = std::min(cum / total, 1.0);
    sup = std::max(sup, std::abs(m - chi2_cdf(std::max(d, 0.0), p)));
    r = s;
  }
  return sup;
}

double cluster_kolmogorov(const Dataset& data, const RimleFit& fit, int j) {
  if (j < 1 || j > fit.params.g()) throw Error(ErrorKind::kInvalidInput, "cluster index out of range");
  const CovFactor factor(fit.params.sigma[j - 1]);
  const Vector d = factor.mahalanobis_sq_rows(data.points(), fit.params.mu[j - 1]);
  const Vector w = fit.tau.tau.col(j);
  return weighted_kolmogorov(std::span<const double>(d.data(), d.size()), std::span<const double>(w.data(), w.size()),
                             data.p());
}

double criterion_D(std::span<const double> k_values, std::span<const double> proportions) {
  if (k_values.size() != proportions.size()) throw Error(ErrorKind::kDimensionMismatch, "one proportion per cluster");
  double num = 0.0;
  double den = 0.0;
  for (std::size_t j = 0; j < k_values.size(); ++j) {
    num += proportions[j] * k_values[j];
    den += proportions[j];
  }
  if (!(den > 0.0)) throw Error(ErrorKind::kUndefinedCluster, "all cluster proportions are zero");
  return num / den;
}

double criterion_D(const Dataset& data, const RimleFit& fit) {
  const int g = fit.params.g();
  std::vector<double> k(g);
  std::vector<double> pi(g);
  for (int j = 1; j <= g; ++j) {
    pi[j - 1] = fit.params.pi(j - 1);
    k[j - 1] = pi[j - 1] > 0.0 ? cluster_kolmogorov(data, fit, j) : 0.0;
  }
  return criterion_D(k, pi);
}

double delta_max(const Dataset& data, const Labeling& init, const ConstraintConfig& constraints) {
  int g = 0;
  for (int l : init) g = std::max(g, l);
  if (g < 1) throw Error(ErrorKind::kInitializationFailure, "initial partition has no cluster");
  RimleConfig cfg;
  cfg.g = g;
  cfg.delta = 0.0;
  cfg.constraints = constraints;
  const MixtureParams theta = params_from_partition(data, init, cfg);
  double best = 0.0;
  for (int j = 0; j < g; ++j) {
    const CovFactor f(theta.sigma[j]);
    best = std::max(best, std::exp(-0.5 * (data.p() * kLog2Pi + f.log_det())));
  }
  return best;
}

GoldenSectionResult golden_section_min(const std::function<double(double)>& f, double lo, double hi, double tol,
                                       int max_evals) {
  if (!(lo < hi)) throw Error(ErrorKind::kInvalidInput, "golden section needs lo < hi");
  GoldenSectionResult best{0.5 * (lo + hi), kInf, 0};
  if (max_evals < 1) return best;
  auto eval = [&](double x) {
    const double v = finite_or_inf(f(x));
    ++best.evaluations;
    if (best.evaluations == 1 || v < best.value || (v == best.value && x < best.argmin)) {
      best.value = v;
      best.argmin = x;
    }
    return v;
  };
  if (max_evals == 1) {
    eval(0.5 * (lo + hi));
    return best;
  }
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = eval(c);
  double fd = eval(d);
  while (best.evaluations < max_evals && (b - a) > tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = eval(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = eval(d);
    }
  }
  return best;
}

GoldenSectionResult bracketed_minimize(const std::function<double(double)>& f, double lo, double hi, int grid_points,
                                       double tol, int max_evals) {
  if (!(lo < hi)) throw Error(ErrorKind::kInvalidInput, "bracketed_minimize needs lo < hi");
  GoldenSectionResult best{lo, kInf, 0};
  auto take = [&](double x, double v) {
    if (best.evaluations == 0 || v < best.value || (v == best.value && x < best.argmin)) {
      best.value = v;
      best.argmin = x;
    }
  };
  const int points = std::min(grid_points, max_evals);
  if (points < 1) return best;
  std::vector<double> grid(points);
  std::vector<double> values(points);
  for (int k = 0; k < points; ++k) {
    grid[k] = points == 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * k / (points - 1);
    values[k] = finite_or_inf(f(grid[k]));
    take(grid[k], values[k]);
    ++best.evaluations;
  }
  const int remaining = max_evals - best.evaluations;
  if (remaining < 1 || points < 2) return best;
  const auto kbest = static_cast<int>(std::min_element(values.begin(), values.end()) - values.begin());
  const double a = grid[std::max(kbest - 1, 0)];
  const double b = grid[std::min(kbest + 1, points - 1)];
  const GoldenSectionResult inner = golden_section_min(f, a, b, tol, remaining);
  best.evaluations += inner.evaluations;
  take(inner.argmin, inner.value);
  return best;
}

TuneTrace fit_otrimle(const Dataset& data, const Labeling& init, const RimleConfig& cfg, const TuneConfig& tune) {
  cfg.validate();
  tune.validate();
  TuneTrace trace;
  std::optional<RimleFit> best_fit;
  double best_obj = kInf;
  double best_delta = 0.0;

  auto evaluate = [&](double delta) {
    TuneEvaluation ev;
    ev.delta = delta;
    RimleConfig c = cfg;
    c.delta = delta;
    try {
      RimleFit fit = fit_rimle(data, init, c);
      ev.pi0 = fit.pi0_hat;
      ev.boundary = fit.noise_cap_binding;
      ev.criterion = criterion_D(data, fit);
      ev.objective = ev.boundary ? kInf : ev.criterion + tune.beta * ev.pi0;
      if (ev.objective < best_obj || (ev.objective == best_obj && std::isfinite(best_obj) && delta < best_delta)) {
        best_obj = ev.objective;
        best_delta = delta;
        best_fit = std::move(fit);
      }
    } catch (const Error&) {
      ev.failed = true;
      ev.objective = kInf;
    }
    trace.evaluations.push_back(ev);
    return ev.objective;
  };

  int budget = tune.max_evals;
  if (tune.include_zero) {
    evaluate(0.0);
    --budget;
  }
  const double upper = delta_max(data, init, cfg.constraints);
  const double log_hi = std::log(std::max(upper, tune.delta_floor));
  const double span = log_hi - std::log(tune.delta_floor);
  // Search variable x = -log(1 + log(delta_max) - log(delta)) in [-log(1 + span), 0]:
  // increasing in delta, and dense near delta_max where D changes fastest.
  auto delta_of = [&](double x) { return std::exp(log_hi - std::expm1(-x)); };
  if (budget > 0) {
    if (span > 0.0) {
      bracketed_minimize([&](double x) { return evaluate(std::max(delta_of(x), tune.delta_floor)); },
                         -std::log1p(span), 0.0, tune.grid_points, tune.gs_tol, budget);
    } else {
      evaluate(tune.delta_floor);
    }
  }
  if (!best_fit) throw Error(ErrorKind::kTuningFailure, "no delta candidate produced a feasible fit");
  trace.selected_delta = best_delta;
  trace.selected_fit = std::move(*best_fit);
  return trace;
}

}  // namespace otrimle
