// Command-line front end: fit, simulate, eval, benchmark and trace.
#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "otrimle/benchmark.hpp"
#include "otrimle/dgp.hpp"
#include "otrimle/error.hpp"
#include "otrimle/io.hpp"
#include "otrimle/methods.hpp"
#include "otrimle/truth_eval.hpp"

using namespace otrimle;

namespace {

struct FitOptions {
  std::string method = "otrimle";
  int g = 2;
  std::optional<double> delta;
  std::optional<double> beta;
  double gamma = 20.0;
  double pi_max = 0.5;
  std::optional<double> trim;
  double nu = 3.0;
};

void add_fit_options(CLI::App* cmd, FitOptions& o) {
  cmd->add_option("--method", o.method, "gmix, gmix.u, rimle, otrimle, otrimle.p, tclust, ot.tclust, ot.tclust.p, tmix")
      ->capture_default_str();
  cmd->add_option("--g", o.g, "number of clusters")->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--delta", o.delta, "improper density level (rimle)");
  cmd->add_option("--beta", o.beta, "noise-proportion penalty for tuned methods");
  cmd->add_option("--gamma", o.gamma, "eigenvalue ratio bound")->capture_default_str();
  cmd->add_option("--pi-max", o.pi_max, "cap on the mean noise responsibility")->capture_default_str();
  cmd->add_option("--trim", o.trim, "trimming level (tclust)");
  cmd->add_option("--nu", o.nu, "degrees of freedom (tmix)")->capture_default_str();
}

MethodSettings settings_of(const FitOptions& o) {
  MethodSettings s;
  s.g = o.g;
  s.delta = o.delta;
  s.beta = o.beta;
  s.gamma = o.gamma;
  s.pi_max = o.pi_max;
  s.trim = o.trim;
  s.nu = o.nu;
  return s;
}

constexpr const char* kOverlapPairName = "overlap-pair";

int cmd_fit(const std::string& data_path, const FitOptions& o, const std::string& out) {
  const Dataset data = read_table(data_path);
  const Labeling init = default_initial_partition(data, o.g);
  const FitResult fit = run_method(o.method, data, init, settings_of(o));
  const std::string text = fit_result_to_text(fit);
  if (out.empty()) {
    std::cout << text;
  } else {
    write_text_file(out, text);
    std::vector<int> counts(fit.g + 1, 0);
    for (int l : fit.labels) ++counts[l];
    std::printf("%s: n=%d p=%d g=%d", fit.method.c_str(), data.n(), data.p(), fit.g);
    if (fit.method.find("tclust") != std::string::npos) {
      std::printf(" trim=%.4g", fit.trim);
    } else {
      std::printf(" delta=%.6g pi0=%.4f", fit.delta, fit.pi0);
    }
    std::printf(" noise=%d clusters=", counts[0]);
    for (int j = 1; j <= fit.g; ++j) std::printf("%s%d", j > 1 ? "/" : "", counts[j]);
    std::printf(" converged=%s\n", fit.converged ? "yes" : "no");
  }
  return 0;
}

int cmd_simulate(const std::string& source, std::uint64_t seed, std::optional<int> n, const std::string& out) {
  LabeledSample sample;
  std::string spec_text;
  if (source == kOverlapPairName) {
    sample = overlap_pair_dataset(seed);
  } else {
    DgpSpec spec;
    if (source.find(".json") != std::string::npos) {
      spec = spec_from_text(read_text_file(source));
    } else {
      bool known = false;
      for (const auto& s : builtin_specs()) known = known || s.name == source;
      if (!known) {
        std::string msg = "unknown builtin spec '" + source + "'; available:";
        for (const auto& s : builtin_specs()) msg += " " + s.name;
        throw Error(ErrorKind::kInvalidInput, msg + " " + kOverlapPairName);
      }
      spec = builtin_spec(source);
    }
    if (n) spec = with_sample_size(spec, *n);
    sample = sample_dgp(spec, seed);
  }
  write_table(out + ".csv", sample.data);
  write_labels(out + ".labels.csv", sample.gen_labels);
  write_text_file(out + ".truth.json", truth_to_text(sample.truth));
  std::printf("wrote %s.csv, %s.labels.csv, %s.truth.json (n=%d, p=%d)\n", out.c_str(), out.c_str(), out.c_str(),
              sample.data.n(), sample.data.p());
  return 0;
}

int cmd_eval(const std::string& data_path, const std::string& fit_path, const std::string& truth_path,
             const std::string& labels_path, bool native) {
  const Dataset data = read_table(data_path);
  const FitResult fit = fit_result_from_text(read_text_file(fit_path));
  if (fit.p != data.p()) throw Error(ErrorKind::kDimensionMismatch, "fit and data dimensions differ");
  Labeling truth;
  int g = fit.g;
  if (!truth_path.empty()) {
    const TruthParams params = truth_from_text(read_text_file(truth_path));
    truth = agr_labels(data, params);
    g = std::max(g, static_cast<int>(params.triples.size()));
  } else {
    truth = read_labels(labels_path);
    for (int l : truth) g = std::max(g, l);
  }
  if (static_cast<int>(truth.size()) != data.n()) throw Error(ErrorKind::kDimensionMismatch, "label count differs from n");
  Labeling estimate;
  if (native) {
    estimate = fit.labels;
  } else {
    TruthParams est;
    est.triples = fit.triples;
    estimate = agr_labels(data, est);
  }
  std::printf("mcr %.6f\n", mcr(truth, estimate, g));
  return 0;
}

int cmd_benchmark(const std::string& config_path, std::optional<int> workers, std::optional<int> replicates,
                  std::optional<std::uint64_t> seed, const std::string& out) {
  BenchmarkConfig cfg = benchmark_config_from_text(read_text_file(config_path));
  if (workers) cfg.workers = *workers;
  if (replicates) cfg.replicates = *replicates;
  if (seed) cfg.master_seed = *seed;
  const BenchmarkReport report = run_benchmark(cfg);
  std::cout << report_table(report);
  if (!out.empty()) {
    write_text_file(out + ".json", report_to_text(report));
    write_text_file(out + ".records.csv", records_csv(report));
  }
  return 0;
}

std::vector<double> parse_grid(const std::string& grid) {
  std::vector<double> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t colon = grid.find(':', start);
    parts.push_back(std::stod(grid.substr(start, colon - start)));
    if (colon == std::string::npos) break;
    start = colon + 1;
  }
  if (parts.size() == 1) return parts;
  if (parts.size() != 3 || parts[2] < 1 || parts[2] != std::floor(parts[2])) {
    throw Error(ErrorKind::kInvalidInput, "grid must be VALUE or LO:HI:COUNT");
  }
  const int count = static_cast<int>(parts[2]);
  std::vector<double> out;
  for (int k = 0; k < count; ++k) out.push_back(count == 1 ? parts[0] : parts[0] + (parts[1] - parts[0]) * k / (count - 1));
  return out;
}

int cmd_trace(const std::string& data_path, const FitOptions& o, const std::string& grid, bool with_zero,
              const std::string& out) {
  const Dataset data = read_table(data_path);
  const Labeling init = default_initial_partition(data, o.g);
  const MethodSettings settings = settings_of(o);
  std::ostringstream table;
  table.precision(10);
  const bool trimming = o.method.find("tclust") != std::string::npos;
  if (trimming) {
    TclustConfig cfg;
    cfg.g = o.g;
    cfg.constraints.gamma = o.gamma;
    table << "trim,D,trimmed\n";
    for (double trim : parse_grid(grid)) {
      cfg.trim_alpha = trim;
      try {
        const TclustFit fit = fit_tclust(data, init, cfg);
        int trimmed = 0;
        for (int l : fit.labels) trimmed += l == 0;
        table << trim << ',' << crisp_criterion_D(data, fit) << ',' << static_cast<double>(trimmed) / data.n() << '\n';
      } catch (const Error&) {
        table << trim << ",nan,nan\n";
      }
    }
  } else {
    RimleConfig cfg;
    cfg.g = o.g;
    cfg.constraints.gamma = settings.gamma;
    cfg.constraints.pi_max = settings.pi_max;
    std::vector<double> deltas;
    if (with_zero) deltas.push_back(0.0);
    for (double ld : parse_grid(grid)) deltas.push_back(std::exp(ld));
    table << "log_delta,delta,D,pi0,boundary\n";
    for (double delta : deltas) {
      cfg.delta = delta;
      const std::string ld = delta > 0.0 ? std::to_string(std::log(delta)) : "-inf";
      try {
        const RimleFit fit = fit_rimle(data, init, cfg);
        table << ld << ',' << delta << ',' << criterion_D(data, fit) << ',' << fit.pi0_hat << ','
              << (fit.noise_cap_binding ? 1 : 0) << '\n';
      } catch (const Error&) {
        table << ld << ',' << delta << ",nan,nan,nan\n";
      }
    }
  }
  if (out.empty()) {
    std::cout << table.str();
  } else {
    write_text_file(out, table.str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust model-based clustering with an improper noise density"};
  app.require_subcommand(1);

  FitOptions fit_opts;
  std::string data_path;
  std::string out;
  auto* fit = app.add_subcommand("fit", "fit a clustering method to a numeric table");
  fit->add_option("data", data_path, "delimited numeric table")->required();
  add_fit_options(fit, fit_opts);
  fit->add_option("--out", out, "result file (default: print to stdout)");

  std::string source;
  std::uint64_t seed = 1;
  std::optional<int> n;
  auto* simulate = app.add_subcommand("simulate", "draw a sample from a data generating process");
  simulate->add_option("spec", source, "builtin name, 'overlap-pair', or a spec .json file")->required();
  simulate->add_option("--seed", seed, "random seed")->capture_default_str();
  simulate->add_option("--n", n, "override the sample size");
  simulate->add_option("--out", out, "output prefix")->required();
  bool list = false;
  auto* catalog = app.add_subcommand("list", "list builtin data generating processes");
  catalog->add_flag("--json", list, "print the specs as JSON");

  std::string fit_path;
  std::string truth_path;
  std::string labels_path;
  bool native = false;
  auto* eval = app.add_subcommand("eval", "misclassification rate of a fit against the reference truth");
  eval->add_option("data", data_path, "table the fit was computed on")->required();
  eval->add_option("fit", fit_path, "fit result file")->required();
  auto* truth_opt = eval->add_option("--truth", truth_path, "truth parameter file (labels by AGR)");
  auto* labels_opt = eval->add_option("--labels", labels_path, "true labels file");
  truth_opt->excludes(labels_opt);
  eval->add_flag("--native", native, "score the fit's own labels instead of relabelling by its parameters");

  std::string config_path;
  std::optional<int> workers;
  std::optional<int> replicates;
  std::optional<std::uint64_t> bench_seed;
  auto* bench = app.add_subcommand("benchmark", "Monte Carlo comparison of methods over data generating processes");
  bench->add_option("config", config_path, "benchmark configuration (.json)")->required();
  bench->add_option("--workers", workers, std::string("worker threads (default: $") + kWorkersEnv + " or all cores)");
  bench->add_option("--replicates", replicates, "override the replicate count");
  bench->add_option("--seed", bench_seed, "override the master seed");
  bench->add_option("--out", out, "output prefix for the report and per-replicate records");

  FitOptions trace_opts;
  std::string grid = "-700:0:15";
  bool with_zero = false;
  auto* trace = app.add_subcommand("trace", "tuning criterion over a grid of delta or trimming values");
  trace->add_option("data", data_path, "delimited numeric table")->required();
  add_fit_options(trace, trace_opts);
  trace->add_option("--grid", grid, "log(delta) or trim values: VALUE or LO:HI:COUNT")->capture_default_str();
  trace->add_flag("--with-zero", with_zero, "also evaluate delta = 0");
  trace->add_option("--out", out, "CSV output (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*fit) return cmd_fit(data_path, fit_opts, out);
    if (*simulate) return cmd_simulate(source, seed, n, out);
    if (*catalog) {
      for (const auto& s : builtin_specs()) {
        if (list) {
          std::cout << spec_to_text(s);
        } else {
          std::printf("%-20s g=%d p=%d n=%d  %s\n", s.name.c_str(), s.g, s.p, s.n, s.description.c_str());
        }
      }
      return 0;
    }
    if (*eval) {
      if (truth_path.empty() && labels_path.empty()) throw Error(ErrorKind::kInvalidInput, "eval needs --truth or --labels");
      return cmd_eval(data_path, fit_path, truth_path, labels_path, native);
    }
    if (*bench) return cmd_benchmark(config_path, workers, replicates, bench_seed, out);
    if (*trace) return cmd_trace(data_path, trace_opts, grid, with_zero, out);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
