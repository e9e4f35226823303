// Acceptance suite: one PASS/FAIL line per criterion, followed by
// informational lines that are reported but not gated.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "otrimle/benchmark.hpp"
#include "otrimle/dgp.hpp"
#include "otrimle/init.hpp"
#include "otrimle/methods.hpp"
#include "otrimle/truth_eval.hpp"
#include "otrimle/tune.hpp"

using namespace otrimle;

namespace {

int g_failures = 0;

struct Outcome {
  bool pass = false;
  std::string detail;
};

void report(int id, const std::string& title, double limit_seconds, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool timely = limit_seconds <= 0.0 || secs < limit_seconds;
  const bool pass = o.pass && timely;
  if (!pass) ++g_failures;
  std::string timing = limit_seconds > 0.0 ? " [" + std::to_string(secs).substr(0, 6) + " s, limit " +
                                                  std::to_string(static_cast<int>(limit_seconds)) + " s]"
                                           : " [" + std::to_string(secs).substr(0, 6) + " s]";
  std::printf("%s criterion %2d: %s -- %s%s\n", pass ? "PASS" : "FAIL", id, title.c_str(), o.detail.c_str(),
              timing.c_str());
  std::fflush(stdout);
}

void info(const std::string& line) {
  std::printf("INFO %s\n", line.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

int workers() { return std::max(1u, std::thread::hardware_concurrency()); }

// ---------------------------------------------------------------------------
// Textbook Gaussian-mixture EM written directly against Eigen, sharing no
// density or constraint code with the library.

struct TextbookEm {
  double loglik = 0.0;
  int iterations = 0;
};

TextbookEm textbook_em(const Matrix& x, const Labeling& init, int g) {
  const int n = static_cast<int>(x.rows());
  const int p = static_cast<int>(x.cols());
  std::vector<double> pi(g);
  std::vector<Vector> mu(g);
  std::vector<Matrix> sigma(g);
  int clustered = 0;
  for (int l : init) clustered += l > 0;
  for (int j = 0; j < g; ++j) {
    Vector sum = Vector::Zero(p);
    int nj = 0;
    for (int i = 0; i < n; ++i)
      if (init[i] == j + 1) {
        sum += x.row(i).transpose();
        ++nj;
      }
    mu[j] = sum / nj;
    Matrix s = Matrix::Zero(p, p);
    for (int i = 0; i < n; ++i)
      if (init[i] == j + 1) {
        const Vector c = x.row(i).transpose() - mu[j];
        s += c * c.transpose();
      }
    sigma[j] = s / nj;
    pi[j] = static_cast<double>(nj) / clustered;
  }

  Matrix dens(n, g);
  auto e_step = [&]() {
    double ll = 0.0;
    for (int j = 0; j < g; ++j) {
      const Matrix inv = sigma[j].inverse();
      const double norm = 1.0 / std::sqrt(std::pow(2.0 * std::numbers::pi, p) * sigma[j].determinant());
      for (int i = 0; i < n; ++i) {
        const Vector c = x.row(i).transpose() - mu[j];
        dens(i, j) = pi[j] * norm * std::exp(-0.5 * c.dot(inv * c));
      }
    }
    for (int i = 0; i < n; ++i) {
      const double total = dens.row(i).sum();
      ll += std::log(total);
      dens.row(i) /= total;
    }
    return ll / n;
  };

  TextbookEm out;
  double ll = e_step();
  for (int it = 1; it <= 20000; ++it) {
    for (int j = 0; j < g; ++j) {
      const double nj = dens.col(j).sum();
      pi[j] = nj / n;
      mu[j] = x.transpose() * dens.col(j) / nj;
      Matrix s = Matrix::Zero(p, p);
      for (int i = 0; i < n; ++i) {
        const Vector c = x.row(i).transpose() - mu[j];
        s += dens(i, j) * c * c.transpose();
      }
      sigma[j] = s / nj;
    }
    const double next = e_step();
    out.iterations = it;
    const bool done = std::abs(next - ll) <= 1e-14 * std::abs(ll);
    ll = next;
    if (done) break;
  }
  out.loglik = ll;
  return out;
}

Matrix two_cluster_sample(std::uint64_t seed, int n) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z;
  std::bernoulli_distribution first(0.55);
  Matrix x(n, 2);
  for (int i = 0; i < n; ++i) {
    const double a = z(rng), b = z(rng);
    if (first(rng)) {
      x(i, 0) = 1.2 * a;
      x(i, 1) = 0.6 * a + 0.8 * b;
    } else {
      x(i, 0) = 4.0 + 0.7 * a;
      x(i, 1) = 2.0 + 1.5 * b;
    }
  }
  return x;
}

// ---------------------------------------------------------------------------

Outcome criterion_reduction() {
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Dataset data(two_cluster_sample(seed, 500));
    Labeling init = default_initial_partition(data, 2);
    RimleConfig cfg;
    cfg.g = 2;
    cfg.delta = 0.0;
    cfg.constraints.gamma = 1e12;
    cfg.tol = 1e-14;
    cfg.max_iter = 20000;
    RimleFit fit = fit_rimle(data, init, cfg);
    TextbookEm ref = textbook_em(data.points(), init, 2);
    const double rel = std::abs(fit.loglik_trace.back() - ref.loglik) / std::abs(ref.loglik);
    worst = std::max(worst, rel);
  }
  return {worst <= 1e-6, "worst relative log-likelihood gap " + fmt("%.2e", worst) + " over 20 datasets"};
}

struct RandomFitStats {
  int fits = 0;
  int eigen_violations = 0;
  int cap_violations = 0;
  int ascent_violations = 0;
  int failures = 0;
  double worst_ratio = 0.0;
  double worst_tau0 = 0.0;
};

RandomFitStats random_fits() {
  RandomFitStats s;
  std::mt19937_64 rng(2024);
  const std::vector<DgpSpec>& specs = builtin_specs();
  const std::vector<std::string>& methods = method_names();
  int k = 0;
  while (s.fits < 200) {
    const DgpSpec& base = specs[rng() % specs.size()];
    const bool high = base.p > 2;
    if (high && rng() % 4 != 0) continue;  // keep most fits two-dimensional for speed
    const int n = high ? 300 + static_cast<int>(rng() % 200) : 150 + static_cast<int>(rng() % 350);
    LabeledSample sample = sample_dgp(with_sample_size(base, n), rng());
    Labeling init = default_initial_partition(sample.data, base.g);
    const std::string& method = methods[k++ % methods.size()];
    MethodSettings settings;
    settings.g = base.g;
    if (method == "rimle") settings.delta = std::exp(std::uniform_real_distribution<double>(-20.0, -2.0)(rng));
    if (method == "tclust") settings.trim = std::uniform_real_distribution<double>(0.0, 0.3)(rng);
    ++s.fits;
    FitResult r;
    try {
      r = run_method(method, sample.data, init, settings);
    } catch (const std::exception&) {
      ++s.failures;
      continue;
    }
    const double ratio = eigenratio(r.params.sigma);
    s.worst_ratio = std::max(s.worst_ratio, ratio);
    if (!(ratio <= 20.0 * (1 + 1e-9))) ++s.eigen_violations;
    const double tau0 = posteriors(sample.data, r.params).tau.col(0).mean();
    s.worst_tau0 = std::max(s.worst_tau0, tau0);
    if (!(tau0 <= 0.5 + 1e-6)) ++s.cap_violations;
    if (r.projected.empty()) {
      // classification objective of tclust: every step is an exact block ascent
      for (std::size_t i = 1; i < r.trace.size(); ++i)
        if (r.trace[i] < r.trace[i - 1] - 1e-10 * std::abs(r.trace[i - 1])) ++s.ascent_violations;
    } else {
      for (std::size_t i = 0; i < r.projected.size(); ++i)
        if (!r.projected[i] && r.trace[i + 1] < r.trace[i] - 1e-10) ++s.ascent_violations;
    }
  }
  return s;
}

struct Fig5Outcome {
  bool separated_at_zero = false;
  bool merged_at_third = false;
  double switching_beta = -1.0;
};

struct PairShape {
  bool separated = false;  // wide group flagged as noise, main components apart
  bool merged = false;     // main components together, wide group a cluster
  int wide_noise = 0;
  int wide_cluster = 0;
  int main_together = 0;
};

PairShape classify_pair(const FitResult& f) {
  PairShape s;
  int a[3] = {0, 0, 0}, c[3] = {0, 0, 0};
  for (int i = 0; i < 200; ++i) a[f.labels[i]]++;
  for (int i = 200; i < 212; ++i) c[f.labels[i]]++;
  const int big = a[1] >= a[2] ? 1 : 2;
  const int other = 3 - big;
  s.wide_noise = c[0];
  s.wide_cluster = c[other];
  s.main_together = a[big];
  s.merged = a[big] >= 190 && c[other] >= 10;
  s.separated = c[0] >= 10 && std::min(a[1], a[2]) >= 60;
  return s;
}

FitResult fit_pair(const Dataset& data, const Labeling& init, double beta) {
  MethodSettings st;
  st.g = 2;
  st.beta = beta;
  return run_method("otrimle", data, init, st);
}

// Smallest beta (to 0.01) at which the solution has switched to the merged
// structure: coarse scan, then bisection between the last unmerged and the
// first merged grid point. Negative when no switch happens up to `top`.
double switching_beta(const Dataset& data, const Labeling& init, double top) {
  double lo = 0.0, hi = -1.0;
  for (double beta = 0.05; beta <= top + 1e-12; beta += 0.05) {
    if (classify_pair(fit_pair(data, init, beta)).merged) {
      hi = beta;
      break;
    }
    lo = beta;
  }
  if (hi < 0.0) return -1.0;
  while (hi - lo > 0.01 + 1e-12) {
    const double mid = 0.5 * (lo + hi);
    (classify_pair(fit_pair(data, init, mid)).merged ? hi : lo) = mid;
  }
  return hi;
}

Outcome criterion_fig5() {
  LabeledSample s = overlap_pair_dataset(kOverlapPairSeed);
  Labeling init = default_initial_partition(s.data, 2);
  PairShape zero = classify_pair(fit_pair(s.data, init, 0.0));
  PairShape third = classify_pair(fit_pair(s.data, init, 1.0 / 3.0));
  const double sw = switching_beta(s.data, init, 1.0);
  const bool pass = zero.wide_noise >= 10 && zero.separated && third.merged && sw >= 0.2 && sw <= 0.4;
  return {pass, "beta=0: " + std::to_string(zero.wide_noise) + "/12 wide points noise; beta=1/3: " +
                    std::to_string(third.wide_cluster) + "/12 in own cluster, " + std::to_string(third.main_together) +
                    "/200 main points together; switching beta " + fmt("%.3f", sw)};
}

void fig5_seed_distribution() {
  std::vector<double> sw;
  int in_range = 0, separated = 0;
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    LabeledSample s = overlap_pair_dataset(seed);
    Labeling init = default_initial_partition(s.data, 2);
    const bool sep = classify_pair(fit_pair(s.data, init, 0.0)).separated;
    separated += sep;
    double b = switching_beta(s.data, init, 0.6);
    if (b < 0.0) b = INFINITY;  // no switch up to 0.6
    sw.push_back(b);
    in_range += sep && b >= 0.2 && b <= 0.4;
  }
  std::sort(sw.begin(), sw.end());
  const double median = 0.5 * (sw[14] + sw[15]);
  info("overlapping-pair draws, seeds 1-30: separated at beta=0 in " + std::to_string(separated) +
       "/30, switching beta in [0.2, 0.4] in " + std::to_string(in_range) + "/30, median switching beta " +
       (std::isfinite(median) ? fmt("%.3f", median) : std::string("> 0.6")));
}

// Monte-Carlo mean of D over a 15-point log-delta grid ending at delta_max,
// plus mean noise proportions of OTRIMLE at two penalties.
struct WideNoiseStudy {
  std::vector<double> mean_d;
  double mean_pi0_zero = 0.0;
  double mean_pi0_two_thirds = 0.0;
};

WideNoiseStudy wide_noise_study(int replicates) {
  const DgpSpec spec = with_sample_size(builtin_spec("WideNoise.3l-like"), 500);
  constexpr int kGrid = 15;
  constexpr double kSpan = 30.0;  // natural-log units below delta_max
  WideNoiseStudy out;
  std::vector<std::vector<double>> d(replicates, std::vector<double>(kGrid, 0.0));
  std::vector<double> pi_zero(replicates), pi_two(replicates);
  std::vector<std::thread> pool;
  std::atomic<int> next{0};
  for (int w = 0; w < workers(); ++w) {
    pool.emplace_back([&] {
      for (int r = next++; r < replicates; r = next++) {
        LabeledSample s = sample_dgp(spec, stream_seed(5, r, "sample:" + spec.name));
        Labeling init = default_initial_partition(s.data, spec.g);
        const double log_max = std::log(delta_max(s.data, init));
        for (int k = 0; k < kGrid; ++k) {
          RimleConfig cfg;
          cfg.g = spec.g;
          cfg.delta = std::exp(log_max - kSpan + kSpan * k / (kGrid - 1));
          d[r][k] = criterion_D(s.data, fit_rimle(s.data, init, cfg));
        }
        MethodSettings st;
        st.g = spec.g;
        st.beta = 0.0;
        pi_zero[r] = run_method("otrimle", s.data, init, st).pi0;
        st.beta = 2.0 / 3.0;
        pi_two[r] = run_method("otrimle", s.data, init, st).pi0;
      }
    });
  }
  for (auto& t : pool) t.join();
  out.mean_d.assign(kGrid, 0.0);
  for (int r = 0; r < replicates; ++r)
    for (int k = 0; k < kGrid; ++k) out.mean_d[k] += d[r][k] / replicates;
  for (int r = 0; r < replicates; ++r) {
    out.mean_pi0_zero += pi_zero[r] / replicates;
    out.mean_pi0_two_thirds += pi_two[r] / replicates;
  }
  return out;
}

Outcome criterion_fig3(const WideNoiseStudy& s) {
  const auto& d = s.mean_d;
  const auto best = std::min_element(d.begin(), d.end()) - d.begin();
  const bool interior = best > 0 && best + 1 < static_cast<long>(d.size()) && d[best] < d.front() && d[best] < d.back();
  std::string curve;
  for (double v : d) curve += fmt("%.3f ", v);
  return {interior, "minimum at grid point " + std::to_string(best + 1) + "/15; mean D: " + curve};
}

Outcome criterion_fig4(const WideNoiseStudy& s) {
  return {s.mean_pi0_two_thirds <= s.mean_pi0_zero + 0.01,
          "mean pi0 " + fmt("%.4f", s.mean_pi0_zero) + " at beta=0, " + fmt("%.4f", s.mean_pi0_two_thirds) +
              " at beta=2/3"};
}

double row_mcr(const BenchmarkReport& r, const std::string& dgp, const std::string& method) {
  for (const ReportRow& row : r.rows)
    if (row.dgp == dgp && row.method == method) return 100.0 * row.mean_mcr;
  return NAN;
}

int row_failures(const BenchmarkReport& r) {
  int f = 0;
  for (const ReportRow& row : r.rows) f += row.failures;
  return f;
}

int max_tuning(const BenchmarkReport& r) {
  int m = 0;
  for (const ReplicateRecord& rec : r.records) m = std::max(m, rec.tuning_evaluations);
  return m;
}

BenchmarkReport table2_benchmark(const std::vector<std::string>& specs, int replicates, std::uint64_t seed) {
  BenchmarkConfig cfg;
  for (const std::string& s : specs) cfg.specs.push_back(builtin_spec(s));
  cfg.methods = {"gmix", "gmix.u", "otrimle", "tclust"};
  cfg.replicates = replicates;
  cfg.master_seed = seed;
  cfg.n = 500;
  cfg.workers = workers();
  return run_benchmark(cfg);
}

int g_table2_tuning = 0;

Outcome criterion_table2() {
  BenchmarkReport r =
      table2_benchmark({"SunSpot.3l-like", "SideNoise.2l-like", "Noiseless.5l-like"}, 50, 7);
  g_table2_tuning = max_tuning(r);
  bool pass = row_failures(r) == 0;
  std::string detail;
  for (const char* dgp : {"SunSpot.3l-like", "SideNoise.2l-like"}) {
    double best = INFINITY;
    for (const char* m : {"otrimle", "gmix.u", "tclust"}) {
      const double v = row_mcr(r, dgp, m);
      pass = pass && v < 5.0;
      best = std::min(best, v);
    }
    const double gm = row_mcr(r, dgp, "gmix");
    pass = pass && gm >= best + 10.0;
    detail += std::string(dgp) + " otrimle " + fmt("%.2f", row_mcr(r, dgp, "otrimle")) + "% gmix.u " +
              fmt("%.2f", row_mcr(r, dgp, "gmix.u")) + "% tclust " + fmt("%.2f", row_mcr(r, dgp, "tclust")) +
              "% gmix " + fmt("%.2f", gm) + "%; ";
  }
  const double ot = row_mcr(r, "Noiseless.5l-like", "otrimle");
  const double gm = row_mcr(r, "Noiseless.5l-like", "gmix");
  pass = pass && std::abs(ot - gm) <= 2.0;
  detail += "Noiseless.5l-like otrimle " + fmt("%.2f", ot) + "% gmix " + fmt("%.2f", gm) + "%";
  if (row_failures(r) > 0) detail += "; " + std::to_string(row_failures(r)) + " failed replicates";
  return {pass, detail};
}

void table2_high_dimensional() {
  BenchmarkReport r = table2_benchmark({"SunSpot.3h-like", "SideNoise.2h-like", "Noiseless.5h-like"}, 10, 7);
  for (const ReportRow& row : r.rows)
    info("p=20, n=500, 10 replicates: " + row.dgp + " " + row.method + " mean mcr " + fmt("%.2f", 100 * row.mean_mcr) +
         "% (se " + fmt("%.2f", 100 * row.se) + ", failures " + std::to_string(row.failures) + ")");
}

Outcome criterion_assignment() {
  std::mt19937_64 rng(99);
  int mismatches = 0;
  for (int rep = 0; rep < 1000; ++rep) {
    const int g = 1 + static_cast<int>(rng() % 5);
    const int n = 1 + static_cast<int>(rng() % 200);
    std::uniform_int_distribution<int> lab(0, g);
    Labeling a(n), b(n);
    for (int i = 0; i < n; ++i) {
      a[i] = lab(rng);
      b[i] = lab(rng);
    }
    if (mcr_assignment(a, b, g) != mcr_exhaustive(a, b, g)) ++mismatches;
  }
  return {mismatches == 0, std::to_string(mismatches) + " mismatches in 1000 instances"};
}

Outcome criterion_mcd() {
  ComponentSpec gauss;
  gauss.family = Family::kGaussian;
  gauss.location = Vector::Zero(2);
  gauss.location << 3.0, -1.0;
  gauss.shape.resize(2, 2);
  gauss.shape << 2.0, 0.4, 0.4, 0.5;
  CenterScatter g = mcd_functional(gauss);
  const bool exact = g.center == gauss.location && g.scatter == gauss.shape;

  const double c = mcd_radial_factor(Family::kStudentT, 3.0, 2);
  std::mt19937_64 rng(31);
  std::normal_distribution<double> z;
  std::chi_squared_distribution<double> chi(3.0);
  Matrix x(100000, 2);
  for (int i = 0; i < x.rows(); ++i) {
    const double s = std::sqrt(3.0 / chi(rng));
    x(i, 0) = s * z(rng);
    x(i, 1) = s * z(rng);
  }
  CenterScatter sample = mcd_subset_search(x, 7);
  const double sample_c = 0.5 * sample.scatter.trace();
  const double rel = std::abs(sample_c - c) / c;
  return {exact && rel <= 0.03, std::string("Gaussian exact: ") + (exact ? "yes" : "no") + "; t3 factor " +
                                    fmt("%.4f", c) + " vs sample MCD " + fmt("%.4f", sample_c) + " (" +
                                    fmt("%.2f", 100 * rel) + "%)"};
}

Outcome criterion_chi2() {
  const double q = chi2_quantile(1.0 - 1e-4, 2);
  const double alpha = 1.0 - chi2_cdf(q, 2);
  const double any = 1.0 - std::pow(1.0 - alpha, 500);
  const bool pass = std::abs(q - 18.42068) <= 1e-4 && std::abs(any - 0.0488) < 5e-5;
  return {pass, "quantile " + fmt("%.6f", q) + ", P(some of 500 points outside) " + fmt("%.5f", any)};
}

Outcome criterion_budget() {
  int worst = 0;
  std::string per_spec;
  for (const DgpSpec& spec : builtin_specs()) {
    LabeledSample s = sample_dgp(spec, stream_seed(11, 0, "sample:" + spec.name));
    Labeling init = default_initial_partition(s.data, spec.g);
    for (const char* method : {"otrimle", "otrimle.p", "ot.tclust"}) {
      MethodSettings st;
      st.g = spec.g;
      FitResult f = run_method(method, s.data, init, st);
      const int evals = static_cast<int>(f.delta_tuning.size() + f.trim_tuning.size());
      worst = std::max(worst, evals);
    }
  }
  worst = std::max(worst, g_table2_tuning);
  return {worst <= 30, "largest number of fits in one tuning run: " + std::to_string(worst) +
                           " (all 12 builtin specs at catalog size, plus the Table 2 runs)"};
}

Outcome criterion_determinism() {
  BenchmarkConfig cfg;
  cfg.specs = {builtin_spec("WideNoise.3l-like"), builtin_spec("TGauss.3l-like")};
  cfg.methods = method_names();
  cfg.settings.delta = 1e-3;
  cfg.replicates = 3;
  cfg.master_seed = 12345;
  cfg.n = 300;
  cfg.workers = 1;
  const std::string one = report_to_text(run_benchmark(cfg));
  cfg.workers = 8;
  const std::string eight = report_to_text(run_benchmark(cfg));
  return {one == eight, one == eight ? "reports identical (" + std::to_string(one.size()) + " bytes)" : "reports differ"};
}

}  // namespace

int main() {
  report(1, "delta=0 RIMLE equals textbook Gaussian-mixture EM", 10.0, criterion_reduction);

  RandomFitStats fits;
  report(2, "constraints hold on 200 randomized fits", 0.0, [&] {
    fits = random_fits();
    return Outcome{fits.eigen_violations == 0 && fits.cap_violations == 0,
                   std::to_string(fits.fits) + " fits (" + std::to_string(fits.failures) + " failed), " +
                       std::to_string(fits.eigen_violations) + " eigenratio and " +
                       std::to_string(fits.cap_violations) + " noise-cap violations; worst ratio " +
                       fmt("%.6f", fits.worst_ratio) + ", worst mean tau0 " + fmt("%.6f", fits.worst_tau0)};
  });
  report(3, "EM ascent on unprojected iterations", 0.0, [&] {
    return Outcome{fits.fits == 200 && fits.ascent_violations == 0,
                   std::to_string(fits.ascent_violations) + " decreasing steps over the fits of criterion 2"};
  });

  report(4, "overlapping pair: noise at beta=0, merged pair at beta=1/3, switch in [0.2, 0.4]", 30.0,
         criterion_fig5);

  WideNoiseStudy wide;
  report(5, "WideNoise-like mean D(delta) has an interior minimum", 300.0, [&] {
    wide = wide_noise_study(50);
    return criterion_fig3(wide);
  });
  report(6, "WideNoise-like mean pi0 does not grow with beta", 0.0, [&] { return criterion_fig4(wide); });

  report(7, "robust methods beat gmix on SunSpot/SideNoise-like; parity on Noiseless-like", 900.0, criterion_table2);
  report(8, "assignment mcr equals exhaustive mcr", 0.0, criterion_assignment);
  report(9, "MCD functionals: Gaussian exact, t3 quadrature vs sample MCD within 3%", 0.0, criterion_mcd);
  report(10, "chi-squared kernel values", 0.0, criterion_chi2);
  report(11, "tuning stays within 30 fits", 0.0, criterion_budget);
  report(12, "benchmark reports identical for 1 and 8 workers", 0.0, criterion_determinism);

  fig5_seed_distribution();
  table2_high_dimensional();

  std::printf("%s: %d criteria failed\n", g_failures == 0 ? "ALL PASS" : "FAILURES", g_failures);
  return g_failures == 0 ? 0 : 1;
}
