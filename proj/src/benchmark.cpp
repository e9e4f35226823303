#include "otrimle/benchmark.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "otrimle/error.hpp"
#include "otrimle/io.hpp"
#include "otrimle/truth_eval.hpp"

namespace otrimle {

using nlohmann::json;

void BenchmarkConfig::validate() const {
  if (specs.empty()) throw Error(ErrorKind::kInvalidInput, "benchmark needs at least one dgp");
  if (methods.empty()) throw Error(ErrorKind::kInvalidInput, "benchmark needs at least one method");
  if (replicates < 1) throw Error(ErrorKind::kInvalidInput, "replicates must be >= 1");
  if (workers < 1) throw Error(ErrorKind::kInvalidInput, "workers must be >= 1");
  if (n && *n < 1) throw Error(ErrorKind::kInvalidInput, "n must be >= 1");
  for (const auto& m : methods) {
    if (std::find(method_names().begin(), method_names().end(), m) == method_names().end()) {
      throw Error(ErrorKind::kInvalidInput, "unknown method '" + m + "'");
    }
  }
  for (const auto& s : specs) s.validate();
}

int default_workers() {
  if (const char* env = std::getenv(kWorkersEnv)) {
    const int w = std::atoi(env);
    if (w >= 1) return w;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

void run_task(const BenchmarkConfig& cfg, const DgpSpec& spec, int replicate, const FitHook& hook,
              ReplicateRecord* out) {
  const std::size_t m = cfg.methods.size();
  for (std::size_t k = 0; k < m; ++k) {
    out[k].dgp = spec.name;
    out[k].method = cfg.methods[k];
    out[k].replicate = replicate;
  }
  auto fail_all = [&](const std::string& why) {
    for (std::size_t k = 0; k < m; ++k) {
      out[k].failed = true;
      out[k].error = why;
    }
  };
  LabeledSample sample;
  Labeling truth;
  Labeling init;
  try {
    sample = sample_dgp(spec, stream_seed(cfg.master_seed, static_cast<std::uint64_t>(replicate), "sample:" + spec.name));
    truth = agr_labels(sample.data, sample.truth);
    init = default_initial_partition(sample.data, spec.g);
  } catch (const std::exception& e) {
    fail_all(e.what());
    return;
  }
  MethodSettings settings = cfg.settings;
  settings.g = spec.g;
  for (std::size_t k = 0; k < m; ++k) {
    ReplicateRecord& rec = out[k];
    try {
      if (hook) hook(spec.name, rec.method, replicate);
      const FitResult fit = run_method(rec.method, sample.data, init, settings);
      TruthParams estimated;
      estimated.triples = fit.triples;
      rec.mcr = mcr(truth, agr_labels(sample.data, estimated), spec.g);
      rec.pi0 = fit.pi0;
      rec.delta = fit.delta;
      rec.trim = fit.trim;
      rec.tuning_evaluations = static_cast<int>(fit.delta_tuning.size() + fit.trim_tuning.size());
    } catch (const std::exception& e) {
      rec.failed = true;
      rec.error = e.what();
    }
  }
}

}  // namespace

BenchmarkReport run_benchmark(const BenchmarkConfig& cfg, const FitHook& hook) {
  cfg.validate();
  std::vector<DgpSpec> specs = cfg.specs;
  if (cfg.n) {
    for (auto& s : specs) s = with_sample_size(s, *cfg.n);
  }
  const std::size_t m = cfg.methods.size();
  const std::size_t reps = static_cast<std::size_t>(cfg.replicates);
  const std::size_t tasks = specs.size() * reps;
  BenchmarkReport report;
  report.records.resize(tasks * m);

  // Each task writes only its own slots, so the records are identical for
  // any worker count and scheduling order.
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t t = next++; t < tasks; t = next++) {
      run_task(cfg, specs[t / reps], static_cast<int>(t % reps), hook, &report.records[t * m]);
    }
  };
  const int threads = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(cfg.workers), tasks));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  for (std::size_t s = 0; s < specs.size(); ++s) {
    for (std::size_t k = 0; k < m; ++k) {
      ReportRow row;
      row.dgp = specs[s].name;
      row.method = cfg.methods[k];
      row.replicates = cfg.replicates;
      std::vector<double> values;
      for (std::size_t r = 0; r < reps; ++r) {
        const ReplicateRecord& rec = report.records[(s * reps + r) * m + k];
        if (rec.failed) {
          ++row.failures;
        } else {
          values.push_back(rec.mcr);
        }
      }
      if (values.empty()) {
        row.mean_mcr = std::numeric_limits<double>::quiet_NaN();
      } else {
        double sum = 0.0;
        for (double v : values) sum += v;
        row.mean_mcr = sum / static_cast<double>(values.size());
        if (values.size() > 1) {
          double ss = 0.0;
          for (double v : values) ss += (v - row.mean_mcr) * (v - row.mean_mcr);
          const double sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
          row.se = sd / std::sqrt(static_cast<double>(values.size()));
        }
      }
      report.rows.push_back(row);
    }
  }
  return report;
}

std::string report_table(const BenchmarkReport& report) {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof line, "%-22s %-12s %5s %9s %8s %5s\n", "dgp", "method", "reps", "mcr(%)", "se(%)", "fail");
  out << line;
  for (const auto& r : report.rows) {
    std::snprintf(line, sizeof line, "%-22s %-12s %5d %9.2f %8.2f %5d\n", r.dgp.c_str(), r.method.c_str(), r.replicates,
                  100.0 * r.mean_mcr, 100.0 * r.se, r.failures);
    out << line;
  }
  return out.str();
}

namespace {

json maybe_num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }
double from_maybe(const json& j) { return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>(); }

}  // namespace

std::string report_to_text(const BenchmarkReport& report) {
  json rows = json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"dgp", r.dgp},
                    {"method", r.method},
                    {"replicates", r.replicates},
                    {"mean_mcr", maybe_num(r.mean_mcr)},
                    {"se", maybe_num(r.se)},
                    {"failures", r.failures}});
  }
  json records = json::array();
  for (const auto& r : report.records) {
    records.push_back({{"dgp", r.dgp},
                       {"method", r.method},
                       {"replicate", r.replicate},
                       {"failed", r.failed},
                       {"error", r.error},
                       {"mcr", maybe_num(r.mcr)},
                       {"pi0", maybe_num(r.pi0)},
                       {"delta", maybe_num(r.delta)},
                       {"trim", maybe_num(r.trim)},
                       {"tuning_evaluations", r.tuning_evaluations}});
  }
  json j{{"schema_version", kSchemaVersion}, {"kind", "benchmark_report"}, {"rows", rows}, {"records", records}};
  return j.dump(2) + "\n";
}

BenchmarkReport report_from_text(const std::string& text) {
  try {
    const json j = json::parse(text);
    if (j.at("schema_version").get<int>() != kSchemaVersion || j.at("kind") != "benchmark_report") {
      throw Error(ErrorKind::kParse, "not a benchmark report of schema version " + std::to_string(kSchemaVersion));
    }
    BenchmarkReport report;
    for (const auto& r : j.at("rows")) {
      report.rows.push_back({r.at("dgp").get<std::string>(), r.at("method").get<std::string>(),
                             r.at("replicates").get<int>(), from_maybe(r.at("mean_mcr")), from_maybe(r.at("se")),
                             r.at("failures").get<int>()});
    }
    for (const auto& r : j.at("records")) {
      report.records.push_back({r.at("dgp").get<std::string>(), r.at("method").get<std::string>(),
                                r.at("replicate").get<int>(), r.at("failed").get<bool>(), r.at("error").get<std::string>(),
                                from_maybe(r.at("mcr")), from_maybe(r.at("pi0")), from_maybe(r.at("delta")),
                                from_maybe(r.at("trim")), r.at("tuning_evaluations").get<int>()});
    }
    return report;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("invalid benchmark report: ") + e.what());
  }
}

std::string records_csv(const BenchmarkReport& report) {
  std::ostringstream out;
  out.precision(17);
  out << "dgp,method,replicate,failed,mcr,pi0,delta,trim,tuning_evaluations\n";
  for (const auto& r : report.records) {
    out << r.dgp << ',' << r.method << ',' << r.replicate << ',' << (r.failed ? 1 : 0) << ',';
    if (r.failed) {
      out << ",,,,";
    } else {
      out << r.mcr << ',' << r.pi0 << ',' << r.delta << ',' << r.trim << ',';
    }
    out << r.tuning_evaluations << '\n';
  }
  return out.str();
}

BenchmarkConfig benchmark_config_from_text(const std::string& text) {
  try {
    const json j = json::parse(text);
    if (j.value("schema_version", kSchemaVersion) != kSchemaVersion) {
      throw Error(ErrorKind::kParse, "unsupported schema_version in benchmark config");
    }
    BenchmarkConfig cfg;
    for (const auto& d : j.at("dgps")) {
      if (d.is_string()) {
        cfg.specs.push_back(builtin_spec(d.get<std::string>()));
      } else {
        json spec = d;
        spec["schema_version"] = kSchemaVersion;
        spec["kind"] = "dgp_spec";
        cfg.specs.push_back(spec_from_text(spec.dump()));
      }
    }
    cfg.methods = j.at("methods").get<std::vector<std::string>>();
    cfg.replicates = j.value("replicates", cfg.replicates);
    cfg.master_seed = j.value("seed", cfg.master_seed);
    if (j.contains("n")) cfg.n = j.at("n").get<int>();
    if (j.contains("settings")) {
      const json& s = j.at("settings");
      cfg.settings.gamma = s.value("gamma", cfg.settings.gamma);
      cfg.settings.pi_max = s.value("pi_max", cfg.settings.pi_max);
      cfg.settings.nu = s.value("nu", cfg.settings.nu);
      if (s.contains("beta")) cfg.settings.beta = s.at("beta").get<double>();
      if (s.contains("trim")) cfg.settings.trim = s.at("trim").get<double>();
      if (s.contains("delta")) cfg.settings.delta = s.at("delta").get<double>();
    }
    cfg.workers = j.value("workers", default_workers());
    cfg.validate();
    return cfg;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("invalid benchmark config: ") + e.what());
  }
}

}  // namespace otrimle
