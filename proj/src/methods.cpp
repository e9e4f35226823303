#include "otrimle/methods.hpp"

#include "otrimle/error.hpp"

namespace otrimle {

namespace {

constexpr double kPenalisedBeta = 1.0 / 3.0;

ConstraintConfig constraints_of(const MethodSettings& s) {
  ConstraintConfig c;
  c.gamma = s.gamma;
  c.pi_max = s.pi_max;
  return c;
}

RimleConfig rimle_config(const MethodSettings& s) {
  RimleConfig cfg;
  cfg.g = s.g;
  cfg.constraints = constraints_of(s);
  return cfg;
}

void fill_from(FitResult& r, const RimleFit& fit) {
  r.params = fit.params;
  r.triples = params_to_cluster_triples(fit);
  r.labels = fit.labels;
  r.pi0 = fit.pi0_hat;
  r.delta = fit.params.delta;
  r.trace = fit.loglik_trace;
  r.projected = fit.projected;
  r.converged = fit.converged;
  r.iterations = fit.iterations;
}

void fill_from(FitResult& r, const TclustFit& fit) {
  r.params = fit.params;
  r.triples = params_to_cluster_triples(fit);
  r.labels = fit.labels;
  r.trim = fit.trim_alpha;
  int trimmed = 0;
  for (int l : fit.labels) trimmed += l == 0;
  r.pi0 = fit.labels.empty() ? 0.0 : static_cast<double>(trimmed) / static_cast<double>(fit.labels.size());
  r.trace = fit.objective_trace;
  r.converged = fit.converged;
  r.iterations = fit.iterations;
}

}  // namespace

const std::vector<std::string>& method_names() {
  static const std::vector<std::string> names = {"gmix",   "gmix.u",    "rimle",       "otrimle", "otrimle.p",
                                                 "tclust", "ot.tclust", "ot.tclust.p", "tmix"};
  return names;
}

Labeling default_initial_partition(const Dataset& data, int g) {
  InitConfig cfg;
  cfg.g = g;
  return initial_partition(data, cfg);
}

FitResult run_method(const std::string& method, const Dataset& data, const Labeling& init,
                     const MethodSettings& settings) {
  FitResult r;
  r.method = method;
  r.g = settings.g;
  r.p = data.p();
  if (method == "gmix") {
    fill_from(r, fit_gmix(data, init, rimle_config(settings)));
  } else if (method == "gmix.u") {
    fill_from(r, fit_gmix_u(data, init, rimle_config(settings)));
  } else if (method == "rimle") {
    if (!settings.delta) throw Error(ErrorKind::kInvalidInput, "rimle needs an explicit delta");
    RimleConfig cfg = rimle_config(settings);
    cfg.delta = *settings.delta;
    fill_from(r, fit_rimle(data, init, cfg));
  } else if (method == "otrimle" || method == "otrimle.p") {
    TuneConfig tune;
    tune.beta = settings.beta.value_or(method == "otrimle.p" ? kPenalisedBeta : 0.0);
    TuneTrace trace = fit_otrimle(data, init, rimle_config(settings), tune);
    fill_from(r, trace.selected_fit);
    r.beta = tune.beta;
    r.delta_tuning = std::move(trace.evaluations);
  } else if (method == "tclust" || method == "ot.tclust" || method == "ot.tclust.p") {
    TclustConfig cfg;
    cfg.g = settings.g;
    cfg.constraints = constraints_of(settings);
    cfg.trim_alpha = settings.trim.value_or(0.1);
    if (method == "tclust") {
      fill_from(r, fit_tclust(data, init, cfg));
    } else {
      TuneConfig tune;
      tune.beta = settings.beta.value_or(method == "ot.tclust.p" ? kPenalisedBeta : 0.0);
      OtTclustResult res = ot_tclust(data, init, cfg, tune);
      fill_from(r, res.fit);
      r.beta = tune.beta;
      r.trim_tuning = std::move(res.evaluations);
    }
  } else if (method == "tmix") {
    TmixConfig cfg;
    cfg.g = settings.g;
    cfg.nu = settings.nu;
    cfg.constraints = constraints_of(settings);
    TmixFit fit = fit_tmix(data, init, cfg);
    r.params = fit.params;
    r.triples = params_to_cluster_triples(fit);
    r.labels = fit.labels;
    r.nu = fit.nu;
    r.trace = fit.loglik_trace;
    r.projected = fit.projected;
    r.converged = fit.converged;
    r.iterations = fit.iterations;
  } else {
    std::string msg = "unknown method '" + method + "'; expected one of:";
    for (const auto& m : method_names()) msg += " " + m;
    throw Error(ErrorKind::kInvalidInput, msg);
  }
  return r;
}

}  // namespace otrimle
