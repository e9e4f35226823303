#include "otrimle/comparators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "otrimle/error.hpp"

namespace otrimle {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

MixtureParams initial_params(const Dataset& data, const Labeling& init, int g, const ConstraintConfig& constraints) {
  RimleConfig cfg;
  cfg.g = g;
  cfg.delta = 0.0;
  cfg.constraints = constraints;
  return params_from_partition(data, init, cfg);
}

// Weighted moments of every cluster followed by the eigenratio projection.
// `mean_weights` shape the centre, `scatter_weights` the scatter, and `mass`
// normalises the scatter and weights the truncation.
void weighted_moments(const Matrix& x, const Matrix& mean_weights, const Matrix& scatter_weights,
                      const std::vector<double>& mass, MixtureParams& params, const ConstraintConfig& constraints,
                      bool* projected) {
  const int g = static_cast<int>(mass.size());
  for (int j = 0; j < g; ++j) {
    const Vector mw = mean_weights.col(j);
    params.mu[j] = x.transpose() * mw / mw.sum();
    const Matrix centered = x.rowwise() - params.mu[j].transpose();
    const Matrix s = centered.transpose() * scatter_weights.col(j).asDiagonal() * centered / mass[j];
    params.sigma[j] = 0.5 * (s + s.transpose());
  }
  EigenratioProjection proj = project_eigenratio(params.sigma, constraints.gamma, mass);
  params.sigma = std::move(proj.sigmas);
  if (projected) *projected = proj.active;
}

}  // namespace

void TclustConfig::validate() const {
  if (!(trim_alpha >= 0.0 && trim_alpha < 1.0)) throw Error(ErrorKind::kInvalidInput, "trim_alpha must lie in [0,1)");
  if (g < 1) throw Error(ErrorKind::kInvalidInput, "g must be >= 1");
  if (!(tol > 0.0) || max_iter < 0) throw Error(ErrorKind::kInvalidInput, "bad tolerance or iteration cap");
  constraints.validate();
}

void TmixConfig::validate() const {
  if (!(nu > 0.0)) throw Error(ErrorKind::kInvalidInput, "nu must be positive");
  if (g < 1) throw Error(ErrorKind::kInvalidInput, "g must be >= 1");
  if (!(tol > 0.0) || max_iter < 0) throw Error(ErrorKind::kInvalidInput, "bad tolerance or iteration cap");
  constraints.validate();
}

TclustFit fit_tclust(const Dataset& data, const Labeling& init, const TclustConfig& cfg) {
  cfg.validate();
  const int n = data.n();
  const int g = cfg.g;
  const int h = static_cast<int>(std::floor(n * (1.0 - cfg.trim_alpha) + 1e-9));
  if (h <= g) throw Error(ErrorKind::kInvalidInput, "too few retained points for g clusters");

  TclustFit fit;
  fit.trim_alpha = cfg.trim_alpha;
  MixtureParams theta = initial_params(data, init, g, cfg.constraints);
  const Matrix& x = data.points();
  std::vector<int> order(n);
  Labeling prev_labels;

  for (int it = 0; it <= cfg.max_iter; ++it) {
    // Assignment: best cluster per point, keep the h highest scores.
    const Matrix terms = log_component_terms(data, theta);
    Vector score(n);
    Labeling best(n);
    for (int i = 0; i < n; ++i) {
      int b = 1;
      for (int j = 2; j <= g; ++j)
        if (terms(i, j) > terms(i, b)) b = j;
      best[i] = b;
      score(i) = terms(i, b);
    }
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return score(a) > score(b); });
    Labeling labels(n, 0);
    double objective = 0.0;
    for (int r = 0; r < h; ++r) {
      labels[order[r]] = best[order[r]];
      objective += score(order[r]);
    }
    fit.objective_trace.push_back(objective);
    fit.retained_trace.push_back(h);
    fit.labels = labels;
    fit.best_cluster = best;
    fit.params = theta;
    fit.iterations = it;

    if (it > 0) {
      const double prev = fit.objective_trace[fit.objective_trace.size() - 2];
      if (labels == prev_labels || std::abs(objective - prev) <= cfg.tol * std::abs(objective)) {
        fit.converged = true;
        break;
      }
    }
    if (it == cfg.max_iter) break;
    prev_labels = labels;

    // Update from the retained assignment.
    Matrix w = Matrix::Zero(n, g);
    for (int i = 0; i < n; ++i)
      if (labels[i] > 0) w(i, labels[i] - 1) = 1.0;
    std::vector<double> mass(g);
    for (int j = 0; j < g; ++j) {
      mass[j] = w.col(j).sum();
      if (mass[j] < 1.0) throw Error(ErrorKind::kClusterCollapse, "cluster " + std::to_string(j + 1) + " is empty");
      theta.pi(j) = mass[j] / h;
    }
    theta.pi0 = 0.0;
    theta.pi /= theta.pi.sum();
    weighted_moments(x, w, w, mass, theta, cfg.constraints, nullptr);
  }
  return fit;
}

double crisp_criterion_D(const Dataset& data, const TclustFit& fit) {
  const int g = fit.params.g();
  std::vector<double> k(g, 0.0);
  std::vector<double> pi(g, 0.0);
  for (int j = 1; j <= g; ++j) {
    std::vector<int> rows;
    for (int i = 0; i < data.n(); ++i)
      if (fit.labels[i] == j) rows.push_back(i);
    if (rows.empty()) continue;
    Matrix members(rows.size(), data.p());
    for (std::size_t r = 0; r < rows.size(); ++r) members.row(r) = data.points().row(rows[r]);
    const Vector d = CovFactor(fit.params.sigma[j - 1]).mahalanobis_sq_rows(members, fit.params.mu[j - 1]);
    const std::vector<double> ones(rows.size(), 1.0);
    k[j - 1] = weighted_kolmogorov(std::span<const double>(d.data(), d.size()), ones, data.p());
    pi[j - 1] = fit.params.pi(j - 1);
  }
  return criterion_D(k, pi);
}

OtTclustResult ot_tclust(const Dataset& data, const Labeling& init, const TclustConfig& cfg, const TuneConfig& tune) {
  cfg.validate();
  tune.validate();
  OtTclustResult out;
  double best_obj = kInf;
  bool have = false;
  auto evaluate = [&](double trim) {
    TrimEvaluation ev;
    ev.trim = trim;
    TclustConfig c = cfg;
    c.trim_alpha = trim;
    try {
      TclustFit fit = fit_tclust(data, init, c);
      ev.criterion = crisp_criterion_D(data, fit);
      ev.objective = ev.criterion + tune.beta * trim;
      if (ev.objective < best_obj || (ev.objective == best_obj && trim < out.selected_trim)) {
        best_obj = ev.objective;
        out.selected_trim = trim;
        out.fit = std::move(fit);
        have = true;
      }
    } catch (const Error&) {
      ev.failed = true;
      ev.objective = kInf;
    }
    out.evaluations.push_back(ev);
    return ev.objective;
  };
  bracketed_minimize(evaluate, 0.0, 0.5, tune.grid_points, 1e-4, tune.max_evals);
  if (!have) throw Error(ErrorKind::kTuningFailure, "no trimming level produced a fit");
  return out;
}

double tmix_loglik(const Dataset& data, const MixtureParams& params, double nu) {
  const int n = data.n();
  const int g = params.g();
  double total = 0.0;
  std::vector<CovFactor> factors;
  for (int j = 0; j < g; ++j) factors.emplace_back(params.sigma[j]);
  std::vector<double> buf(g);
  for (int i = 0; i < n; ++i) {
    const Vector xi = data.row(i);
    for (int j = 0; j < g; ++j) buf[j] = std::log(params.pi(j)) + t_logpdf(xi, params.mu[j], factors[j], nu);
    total += log_sum_exp(buf.data(), g);
  }
  return total / n;
}

TmixFit fit_tmix(const Dataset& data, const Labeling& init, const TmixConfig& cfg) {
  cfg.validate();
  const int n = data.n();
  const int g = cfg.g;
  const double p = data.p();
  const double nu = cfg.nu;
  const Matrix& x = data.points();
  TmixFit fit;
  fit.nu = nu;
  MixtureParams theta = initial_params(data, init, g, cfg.constraints);

  // E-step: responsibilities, precision weights u = (nu + p) / (nu + d), l_n.
  auto e_step = [&](const MixtureParams& th, Matrix& tau, Matrix& u) {
    Matrix terms(n, g);
    u.resize(n, g);
    const double norm = std::lgamma(0.5 * (nu + p)) - std::lgamma(0.5 * nu) - 0.5 * p * std::log(nu * M_PI);
    for (int j = 0; j < g; ++j) {
      const CovFactor f(th.sigma[j]);
      const Vector d = f.mahalanobis_sq_rows(x, th.mu[j]);
      const double c = std::log(th.pi(j)) + norm - 0.5 * f.log_det();
      for (int i = 0; i < n; ++i) {
        terms(i, j) = c - 0.5 * (nu + p) * std::log1p(d(i) / nu);
        u(i, j) = (nu + p) / (nu + d(i));
      }
    }
    tau.resize(n, g);
    double total = 0.0;
    std::vector<double> buf(g);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < g; ++j) buf[j] = terms(i, j);
      const double lse = log_sum_exp(buf.data(), g);
      if (!std::isfinite(lse)) throw Error(ErrorKind::kNonFiniteLikelihood, "t mixture density vanished");
      total += lse;
      for (int j = 0; j < g; ++j) tau(i, j) = std::exp(buf[j] - lse);
    }
    return total / n;
  };

  Matrix tau;
  Matrix u;
  fit.loglik_trace.push_back(e_step(theta, tau, u));
  for (int it = 1; it <= cfg.max_iter; ++it) {
    std::vector<double> mass(g);
    for (int j = 0; j < g; ++j) {
      mass[j] = tau.col(j).sum();
      if (!(mass[j] >= 1e-10 * n)) throw Error(ErrorKind::kClusterCollapse, "cluster " + std::to_string(j + 1) + " lost all its weight");
      theta.pi(j) = mass[j] / n;
    }
    theta.pi /= theta.pi.sum();
    const Matrix tu = tau.cwiseProduct(u);
    bool projected = false;
    weighted_moments(x, tu, tu, mass, theta, cfg.constraints, &projected);
    fit.projected.push_back(projected);
    fit.loglik_trace.push_back(e_step(theta, tau, u));
    fit.iterations = it;
    const double cur = fit.loglik_trace.back();
    const double prev = fit.loglik_trace[fit.loglik_trace.size() - 2];
    if (std::abs(cur - prev) <= cfg.tol * std::abs(cur)) {
      fit.converged = true;
      break;
    }
  }
  fit.params = theta;
  fit.tau.tau = Matrix::Zero(n, g + 1);
  fit.tau.tau.rightCols(g) = tau;
  fit.labels = assign(fit.tau);
  return fit;
}

std::vector<ClusterTriple> params_to_cluster_triples(const RimleFit& fit) {
  const MixtureParams& p = fit.params;
  const double mass = p.pi.sum();
  if (!(mass > 0.0)) throw Error(ErrorKind::kUndefinedCluster, "no cluster mass");
  std::vector<ClusterTriple> out;
  for (int j = 0; j < p.g(); ++j) out.push_back({p.pi(j) / mass, p.mu[j], p.sigma[j]});
  return out;
}

std::vector<ClusterTriple> params_to_cluster_triples(const TclustFit& fit) {
  const MixtureParams& p = fit.params;
  const double mass = p.pi.sum();
  std::vector<ClusterTriple> out;
  for (int j = 0; j < p.g(); ++j) out.push_back({p.pi(j) / mass, p.mu[j], p.sigma[j]});
  return out;
}

std::vector<ClusterTriple> params_to_cluster_triples(const TmixFit& fit) {
  if (!(fit.nu > 2.0)) throw Error(ErrorKind::kUndefinedCovariance, "t covariance needs nu > 2");
  const MixtureParams& p = fit.params;
  const double mass = p.pi.sum();
  const double factor = fit.nu / (fit.nu - 2.0);
  std::vector<ClusterTriple> out;
  for (int j = 0; j < p.g(); ++j) out.push_back({p.pi(j) / mass, p.mu[j], factor * p.sigma[j]});
  return out;
}

}  // namespace otrimle
