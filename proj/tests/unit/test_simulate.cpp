#include <cmath>
#include <vector>

#include "doctest.h"
#include "ggdrift/errors.hpp"
#include "ggdrift/gg_model.hpp"
#include "ggdrift/latent_drift.hpp"
#include "ggdrift/simulate.hpp"
#include "json.hpp"
#include "test_support.hpp"

using namespace ggdrift;
using namespace ggdrift::sim;

TEST_CASE("default scenario shape") {
  const TruthScenario sc;
  const auto s = generate_dataset(sc);
  CHECK(s.data.n_cohorts() == 60);
  CHECK(s.data.n_ages() == 25);
  CHECK(s.data.grid().start_age == 80);
  CHECK(s.data.cohorts()[0] == 1850);
  CHECK(s.data.observed_cells() == 1500);
  CHECK(sc.a_at(1) == doctest::Approx(0.06));
  CHECK(sc.a_at(60) == doctest::Approx(0.04));
  CHECK(sc.exposure_at(1, 0) == 1e5);
  CHECK(sc.exposure_at(1, 10) == doctest::Approx(1e5 * std::pow(0.98, 10)));
  CHECK_NOTHROW(s.truth.validate());
}

TEST_CASE("zero sigma gives a flat walk") {
  TruthScenario sc;
  sc.sigma_rw = 0.0;
  const auto w = draw_walk(sc);
  for (double v : w.w) CHECK(v == 0.0);
}

TEST_CASE("innovations have Laplace moments") {
  // E|w| = sigma, Var w = 2 sigma^2.
  TruthScenario sc;
  sc.n_cohorts = 20001;
  sc.sigma_rw = 0.3;
  sc.seed = 5;
  const auto w = draw_walk(sc).w;
  double abs_sum = 0.0;
  for (double v : w) abs_sum += std::abs(v);
  const double n = static_cast<double>(w.size());
  CHECK(abs_sum / n == doctest::Approx(0.3).epsilon(0.03));
  CHECK(testing::sd(w) * testing::sd(w) == doctest::Approx(2 * 0.09).epsilon(0.06));
  CHECK(std::abs(testing::mean(w)) < 4.0 * std::sqrt(0.18 / n));
}

TEST_CASE("huge exposures give death rates close to the hazard") {
  TruthScenario sc;
  sc.n_cohorts = 4;
  sc.exposure_base = 1e8;
  sc.exposure_decline = 0.0;
  sc.seed = 9;
  const auto s = generate_dataset(sc);
  const auto lb = walk::log_slopes(s.truth.walk);
  for (std::size_t t = 0; t < 4; ++t)
    for (std::size_t k = 0; k < 25; ++k) {
      const double mu = model::cohort_hazard({s.truth.a[t], std::exp(lb[t]), s.truth.gamma[t]}, k + 0.5);
      const double rate = static_cast<double>(s.data.deaths(t)[k]) / 1e8;
      CHECK(std::abs(rate - mu) < 5.0 * std::sqrt(mu / 1e8));
    }
}

TEST_CASE("zero exposure gives zero deaths") {
  TruthScenario sc;
  sc.n_cohorts = 2;
  sc.n_ages = 3;
  sc.exposures = {0.0, 100.0, 0.0, 0.0, 0.0, 0.0};
  const auto s = generate_dataset(sc);
  CHECK(s.data.deaths(0)[0] == 0);
  CHECK(s.data.deaths(1)[2] == 0);
}

TEST_CASE("simulation is deterministic in the seed") {
  TruthScenario sc;
  sc.seed = 17;
  const auto a = generate_dataset(sc);
  const auto b = generate_dataset(sc);
  CHECK(std::equal(a.data.all_deaths().begin(), a.data.all_deaths().end(), b.data.all_deaths().begin()));
  CHECK(a.truth.walk.w == b.truth.walk.w);
  sc.seed = 18;
  const auto c = generate_dataset(sc);
  CHECK(c.truth.walk.w != a.truth.walk.w);
}

TEST_CASE("mean deaths match expected deaths over seeds") {
  TruthScenario sc;
  sc.n_cohorts = 3;
  sc.n_ages = 5;
  sc.sigma_rw = 0.0;
  sc.exposure_base = 200.0;
  const int reps = 4000;
  std::vector<double> sum(15, 0.0);
  posterior::ModelParameters truth;
  for (int r = 0; r < reps; ++r) {
    sc.seed = 1000 + r;
    const auto s = generate_dataset(sc);
    truth = s.truth;
    for (std::size_t i = 0; i < 15; ++i) sum[i] += static_cast<double>(s.data.all_deaths()[i]);
  }
  const auto lb = walk::log_slopes(truth.walk);
  for (std::size_t t = 0; t < 3; ++t)
    for (std::size_t k = 0; k < 5; ++k) {
      const double m = model::cohort_hazard({truth.a[t], std::exp(lb[t]), truth.gamma[t]}, k + 0.5) *
                       sc.exposure_at(int(t) + 1, int(k));
      CHECK(std::abs(sum[t * 5 + k] / reps - m) < 4.0 * std::sqrt(m / reps));
    }
}

TEST_CASE("scenario validation names the field") {
  TruthScenario sc;
  sc.sigma_rw = -1.0;
  try {
    sc.validate();
    FAIL("no error");
  } catch (const ArgumentError& e) {
    CHECK(std::string(e.what()).find("sigma_rw") != std::string::npos);
  }
  sc = {};
  sc.n_cohorts = 1;
  CHECK_THROWS_AS(sc.validate(), ArgumentError);
  sc = {};
  sc.exposures = {1.0, 2.0};
  CHECK_THROWS_AS(sc.validate(), ArgumentError);
  sc = {};
  sc.gamma_per_cohort = {0.1};
  CHECK_THROWS_AS(sc.validate(), ArgumentError);
}

TEST_CASE("truth json") {
  TruthScenario sc;
  sc.n_cohorts = 5;
  const auto s = generate_dataset(sc);
  const auto j = nlohmann::json::parse(truth_json(sc, s));
  CHECK(j["b"].get<double>() == 0.105);
  CHECK(j["a"].size() == 5);
  CHECK(j["b_t"].size() == 5);
}
