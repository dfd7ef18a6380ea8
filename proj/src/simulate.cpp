#include "ggdrift/simulate.hpp"

#include <cmath>

#include "json.hpp"

#include "ggdrift/errors.hpp"
#include "ggdrift/gg_model.hpp"
#include "ggdrift/rng.hpp"

namespace ggdrift::sim {

namespace {

void require(bool ok, const std::string& field, const std::string& what) {
  if (!ok) throw ArgumentError("scenario." + field + " " + what);
}

bool positive(double x) { return x > 0.0 && std::isfinite(x); }

}  // namespace

void TruthScenario::validate() const {
  require(n_cohorts >= 2, "n_cohorts", "must be >= 2");
  require(n_ages >= 1, "n_ages", "must be >= 1");
  require(start_age >= 0, "start_age", "must be >= 0");
  require(positive(b), "b", "must be positive");
  require(std::isfinite(beta), "beta", "must be finite");
  require(sigma_rw >= 0.0 && std::isfinite(sigma_rw), "sigma_rw", "must be >= 0");
  require(positive(a_first), "a_first", "must be positive");
  require(positive(a_last), "a_last", "must be positive");
  require(gamma >= 0.0 && std::isfinite(gamma), "gamma", "must be >= 0");
  if (!gamma_per_cohort.empty()) {
    require(gamma_per_cohort.size() == static_cast<std::size_t>(n_cohorts), "gamma_per_cohort",
            "must have n_cohorts entries");
    for (double g : gamma_per_cohort) require(g >= 0.0 && std::isfinite(g), "gamma_per_cohort", "entries must be >= 0");
  }
  require(exposure_base >= 0.0 && std::isfinite(exposure_base), "exposure_base", "must be >= 0");
  require(exposure_decline >= 0.0 && exposure_decline < 1.0, "exposure_decline", "must lie in [0, 1)");
  if (!exposures.empty()) {
    require(exposures.size() == static_cast<std::size_t>(n_cohorts) * static_cast<std::size_t>(n_ages), "exposures",
            "must have n_cohorts * n_ages entries");
    for (double e : exposures) require(e >= 0.0 && std::isfinite(e), "exposures", "entries must be >= 0");
  }
}

double TruthScenario::a_at(int t) const {
  const double f = n_cohorts > 1 ? static_cast<double>(t - 1) / (n_cohorts - 1) : 0.0;
  return a_first * std::pow(a_last / a_first, f);
}

double TruthScenario::gamma_at(int t) const {
  return gamma_per_cohort.empty() ? gamma : gamma_per_cohort[static_cast<std::size_t>(t - 1)];
}

double TruthScenario::exposure_at(int t, int k) const {
  if (!exposures.empty()) return exposures[static_cast<std::size_t>((t - 1) * n_ages + k)];
  return exposure_base * std::pow(1.0 - exposure_decline, k);
}

walk::LatentWalk draw_walk(const TruthScenario& scenario) {
  scenario.validate();
  walk::LatentWalk lw;
  lw.log_b = std::log(scenario.b);
  lw.beta = scenario.beta;
  lw.sigma_rw = scenario.sigma_rw;
  lw.w.assign(static_cast<std::size_t>(scenario.n_cohorts), 0.0);
  Random rng(derive_seed(scenario.seed, 0));
  for (double& w : lw.w) {
    const double u = rng.uniform() - 0.5;
    // Inverse CDF of Laplace(0, s): -s sgn(u) log(1 - 2|u|).
    const double mag = -std::log1p(-2.0 * std::abs(u));
    w = scenario.sigma_rw == 0.0 ? 0.0 : (u < 0.0 ? -1.0 : 1.0) * scenario.sigma_rw * mag;
  }
  return lw;
}

Simulated generate_dataset(const TruthScenario& scenario) {
  const auto lw = draw_walk(scenario);
  const auto log_b = walk::log_slopes(lw);
  const auto T = static_cast<std::size_t>(scenario.n_cohorts);
  const auto K = static_cast<std::size_t>(scenario.n_ages);

  Simulated out;
  out.truth.walk = lw;
  std::vector<int> cohorts(T);
  std::vector<std::int64_t> D(T * K);
  std::vector<double> E(T * K);
  std::vector<std::uint8_t> M(T * K, 1);
  const model::AgeGrid grid{scenario.start_age, scenario.n_ages};
  Random rng(derive_seed(scenario.seed, 1));
  for (std::size_t t = 0; t < T; ++t) {
    const int ti = static_cast<int>(t) + 1;
    cohorts[t] = scenario.first_cohort + static_cast<int>(t);
    const model::GompertzCohortParams p{scenario.a_at(ti), std::exp(log_b[t]), scenario.gamma_at(ti)};
    out.truth.a.push_back(p.a);
    out.truth.gamma.push_back(p.gamma);
    std::vector<double> e(K);
    for (std::size_t k = 0; k < K; ++k) e[k] = scenario.exposure_at(ti, static_cast<int>(k));
    const auto mu = model::expected_deaths(p, grid, e);
    for (std::size_t k = 0; k < K; ++k) {
      E[t * K + k] = e[k];
      D[t * K + k] = rng.poisson(mu[k]);
    }
  }
  out.data = CohortDataset(grid, std::move(cohorts), std::move(D), std::move(E), std::move(M));
  out.data.country = "SIM";
  return out;
}

std::string truth_json(const TruthScenario& scenario, const Simulated& sim) {
  nlohmann::ordered_json j;
  j["seed"] = scenario.seed;
  j["n_cohorts"] = scenario.n_cohorts;
  j["n_ages"] = scenario.n_ages;
  j["start_age"] = scenario.start_age;
  j["b"] = scenario.b;
  j["log_b"] = sim.truth.walk.log_b;
  j["beta"] = scenario.beta;
  j["sigma_rw"] = scenario.sigma_rw;
  j["a"] = sim.truth.a;
  j["gamma"] = sim.truth.gamma;
  j["w"] = sim.truth.walk.w;
  std::vector<double> bt;
  for (double lb : walk::log_slopes(sim.truth.walk)) bt.push_back(std::exp(lb));
  j["b_t"] = bt;
  return j.dump(2);
}

}  // namespace ggdrift::sim
