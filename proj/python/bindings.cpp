#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>

#include "ggdrift/errors.hpp"

#include "ggdrift/gg_model.hpp"
#include "ggdrift/latent_drift.hpp"
#include "ggdrift/mcmc.hpp"
#include "ggdrift/postsummary.hpp"
#include "ggdrift/simulate.hpp"
#include "ggdrift/stationarity.hpp"

namespace py = pybind11;
using namespace ggdrift;

namespace {

py::dict stationarity_dict(const diag::StationarityResult& r) {
  py::dict d;
  d["test"] = r.name();
  d["statistic"] = r.statistic;
  d["p_value"] = r.p_value;
  d["bracket"] = r.bracket;
  d["reject_5pct"] = r.reject_5pct;
  d["lags"] = r.lags;
  d["degenerate"] = r.degenerate;
  return d;
}

sim::TruthScenario scenario_from(const py::dict& kw) {
  sim::TruthScenario s;
  for (const auto& [k, v] : kw) {
    const auto key = k.cast<std::string>();
    if (key == "n_cohorts") s.n_cohorts = v.cast<int>();
    else if (key == "n_ages") s.n_ages = v.cast<int>();
    else if (key == "start_age") s.start_age = v.cast<int>();
    else if (key == "b") s.b = v.cast<double>();
    else if (key == "beta") s.beta = v.cast<double>();
    else if (key == "sigma_rw") s.sigma_rw = v.cast<double>();
    else if (key == "gamma") s.gamma = v.cast<double>();
    else if (key == "a_first") s.a_first = v.cast<double>();
    else if (key == "a_last") s.a_last = v.cast<double>();
    else if (key == "exposure_base") s.exposure_base = v.cast<double>();
    else if (key == "seed") s.seed = v.cast<std::uint64_t>();
    else throw py::key_error("unknown scenario field '" + key + "'");
  }
  return s;
}

py::dict simulate(const py::dict& kw) {
  const auto s = scenario_from(kw);
  const auto r = sim::generate_dataset(s);
  py::dict d;
  d["cohorts"] = std::vector<int>(r.data.cohorts().begin(), r.data.cohorts().end());
  d["n_ages"] = r.data.n_ages();
  d["start_age"] = r.data.grid().start_age;
  d["deaths"] = std::vector<std::int64_t>(r.data.all_deaths().begin(), r.data.all_deaths().end());
  d["exposures"] = std::vector<double>(r.data.all_exposures().begin(), r.data.all_exposures().end());
  std::vector<double> bt;
  for (double lb : walk::log_slopes(r.truth.walk)) bt.push_back(std::exp(lb));
  d["b_t"] = bt;
  d["w"] = r.truth.walk.w;
  return d;
}

py::dict fit(const py::dict& kw, int chains, int iter, int warmup, std::uint64_t seed) {
  const auto data = sim::generate_dataset(scenario_from(kw)).data;
  mcmc::SamplerConfig cfg;
  cfg.n_chains = chains;
  cfg.n_iter = iter;
  cfg.n_warmup = warmup;
  cfg.seed = seed;
  mcmc::PosteriorDraws draws;
  {
    py::gil_scoped_release release;
    draws = mcmc::run_chains(data, cfg);
  }
  const auto rep = summary::summarize(draws);
  py::dict out;
  for (const auto& p : rep.parameters) {
    py::dict e;
    e["estimate"] = p.mode;
    e["lower"] = p.hpd_low;
    e["upper"] = p.hpd_high;
    e["p_direction"] = p.p_direction;
    e["p"] = p.p_two_sided;
    e["p_map"] = p.p_map;
    e["rhat"] = p.rhat;
    e["ess"] = p.ess;
    out[py::str(p.name)] = e;
  }
  out["max_rhat"] = rep.max_rhat;
  out["mdd_percent"] = rep.mdd.mode_percent;
  return out;
}

}  // namespace

PYBIND11_MODULE(_ggdrift, m) {
  m.doc() = "Gamma-Gompertz cohort model with a drifting log-slope walk";

  m.def("individual_hazard", [](double z, double a, double b, double x) {
    return model::individual_hazard(z, {a, b, 0.0}, x);
  }, py::arg("z"), py::arg("a"), py::arg("b"), py::arg("x"));
  m.def("cohort_hazard", [](double a, double b, double gamma, double x) {
    return model::cohort_hazard({a, b, gamma}, x);
  }, py::arg("a"), py::arg("b"), py::arg("gamma"), py::arg("x"));
  m.def("expected_deaths", [](double a, double b, double gamma, int start_age, const std::vector<double>& exposures) {
    return model::expected_deaths({a, b, gamma}, {start_age, static_cast<int>(exposures.size())}, exposures);
  }, py::arg("a"), py::arg("b"), py::arg("gamma"), py::arg("start_age"), py::arg("exposures"));
  m.def("laplace_logpdf", &walk::laplace_logpdf, py::arg("x"), py::arg("mu"), py::arg("scale"));

  m.def("hpd_interval", [](const std::vector<double>& d, double mass) {
    const auto i = summary::hpd_interval(d, mass);
    return py::make_tuple(i.low, i.high);
  }, py::arg("draws"), py::arg("mass") = 0.95);
  m.def("posterior_mode", [](const std::vector<double>& d) { return summary::posterior_mode(d); }, py::arg("draws"));
  m.def("p_direction", [](const std::vector<double>& d) { return summary::p_direction(d); }, py::arg("draws"));
  m.def("p_two_sided", &summary::p_two_sided, py::arg("pd"));
  m.def("p_map", [](const std::vector<double>& d) { return summary::p_map(d); }, py::arg("draws"));
  m.def("mdd", &summary::mdd, py::arg("sigma_rw"), py::arg("n_cohorts"));
  m.def("mdd_percent", &summary::mdd_percent, py::arg("sigma_rw"), py::arg("n_cohorts"));

  m.def("adf_test", [](const std::vector<double>& s) { return stationarity_dict(diag::adf_test(s)); }, py::arg("series"));
  m.def("kpss_test", [](const std::vector<double>& s) { return stationarity_dict(diag::kpss_test(s)); },
        py::arg("series"));

  m.def("simulate", &simulate, "Synthetic dataset; keyword overrides of the default scenario",
        py::arg("scenario") = py::dict());
  m.def("fit_simulated", &fit, "Fit a simulated scenario and return the summary table",
        py::arg("scenario") = py::dict(), py::arg("chains") = 4, py::arg("iter") = 6000, py::arg("warmup") = 4000,
        py::arg("seed") = 20260101);

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ArgumentError>(m, "ArgumentError", PyExc_ValueError);
  py::register_exception<SummaryError>(m, "SummaryError", PyExc_ValueError);
  py::register_exception<DiagnosticError>(m, "DiagnosticError", PyExc_ValueError);
}
