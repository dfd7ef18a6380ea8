#include <cmath>
#include <limits>
#include <vector>

#include <boost/multiprecision/cpp_dec_float.hpp>

#include "doctest.h"
#include "ggdrift/errors.hpp"
#include "ggdrift/gg_model.hpp"

using namespace ggdrift;
using namespace ggdrift::model;
using Big = boost::multiprecision::cpp_dec_float_50;

namespace {

// Hazard evaluated in 50-digit arithmetic straight from the definition.
double hazard_oracle(double a, double b, double gamma, double x) {
  const Big A(a), B(b), G(gamma), X(x);
  const Big e = boost::multiprecision::exp(B * X);
  return static_cast<double>(A * e / (Big(1) + G * (A / B) * (e - Big(1))));
}

double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }

}  // namespace

TEST_CASE("individual_hazard examples") {
  CHECK(individual_hazard(1.0, {0.05, 0.1, 0.0}, 0.0) == doctest::Approx(0.05).epsilon(1e-15));
  CHECK(individual_hazard(0.0, {0.05, 0.1, 0.0}, 10.0) == 0.0);
  const double want = static_cast<double>(Big(2) * Big("0.05") * boost::multiprecision::exp(Big(1)));
  CHECK(rel(individual_hazard(2.0, {0.05, 0.1, 0.0}, 10.0), want) < 1e-14);
  CHECK(rel(individual_hazard(2.0, {0.05, 0.1, 0.0}, 10.0), 0.2718281828459045) < 1e-14);
}

TEST_CASE("individual_hazard rejects bad input") {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS((void)individual_hazard(nan, {0.05, 0.1, 0.0}, 1.0), DomainError);
  CHECK_THROWS_AS((void)individual_hazard(1.0, {0.05, 0.1, 0.0}, INFINITY), DomainError);
  CHECK_THROWS_AS((void)individual_hazard(1.0, {nan, 0.1, 0.0}, 1.0), DomainError);
}

TEST_CASE("individual_hazard increases with age for positive frailty") {
  double prev = 0.0;
  for (int i = 0; i <= 100; ++i) {
    const double h = individual_hazard(1.3, {0.02, 0.09, 0.0}, i * 0.5);
    CHECK(h > prev);
    prev = h;
  }
}

TEST_CASE("cohort_hazard examples") {
  CHECK(cohort_hazard({0.05, 0.1, 0.0}, 10.0) == doctest::Approx(0.05 * std::exp(1.0)).epsilon(1e-14));
  CHECK(cohort_hazard({0.05, 0.1, 0.0}, 10.0) == doctest::Approx(0.1359140914).epsilon(1e-9));
  // 0.369453 / 1.638906 by hand; checked against the 50-digit oracle too.
  CHECK(cohort_hazard({0.05, 0.1, 0.2}, 20.0) == doctest::Approx(0.2254273).epsilon(1e-6));
  CHECK(rel(cohort_hazard({0.05, 0.1, 0.2}, 20.0), hazard_oracle(0.05, 0.1, 0.2, 20.0)) < 1e-13);
  CHECK(std::abs(cohort_hazard({0.05, 0.1, 0.2}, 500.0) - 0.5) < 1e-9);
}

TEST_CASE("cohort_hazard rejects b = 0 and negative ages") {
  CHECK_THROWS_AS((void)cohort_hazard({0.05, 0.0, 0.2}, 1.0), DomainError);
  CHECK_THROWS_AS((void)cohort_hazard({0.05, 0.1, 0.2}, -1.0), DomainError);
  CHECK_THROWS_AS((void)cohort_hazard({0.05, 0.1, -0.2}, 1.0), DomainError);
}

TEST_CASE("gamma = 0 reduces to the Gompertz hazard") {
  for (double a : {1e-4, 0.01, 0.05, 0.3})
    for (double b : {0.02, 0.08, 0.1, 0.15})
      for (double x : {0.0, 0.5, 3.0, 17.5, 40.0, 250.0, 1000.0}) {
        const double want = a * std::exp(b * x);
        if (!std::isfinite(want)) continue;
        CHECK(rel(cohort_hazard({a, b, 0.0}, x), want) < 1e-12);
      }
}

TEST_CASE("cohort_hazard is strictly increasing when gamma a < b") {
  for (double g : {0.0, 0.05, 0.2, 1.0}) {
    const GompertzCohortParams p{0.05, 0.1, g};
    double prev = -1.0;
    for (int i = 0; i <= 600; ++i) {
      const double h = cohort_hazard(p, i * 0.25);
      CHECK(h > prev);
      prev = h;
    }
  }
}

TEST_CASE("cohort_hazard never exceeds the Gompertz hazard or the plateau bound") {
  for (double a : {0.01, 0.05, 0.2})
    for (double b : {0.05, 0.1})
      for (double g : {0.05, 0.2, 1.0, 3.0})
        for (double x = 0.0; x <= 200.0; x += 2.5) {
          const double h = cohort_hazard({a, b, g}, x);
          const double bound = std::min(a * std::exp(b * x), b / g + a);
          CHECK(h <= bound * (1.0 + 1e-14));
        }
}

TEST_CASE("cohort_hazard stays accurate up to b x = 200") {
  for (double a : {1e-3, 0.05, 0.5})
    for (double b : {0.05, 0.1, 0.2})
      for (double g : {1e-6, 0.01, 0.2, 2.0})
        for (double bx : {0.0, 1.0, 10.0, 29.9, 30.1, 50.0, 100.0, 150.0, 200.0}) {
          const double x = bx / b;
          const double got = cohort_hazard({a, b, g}, x);
          REQUIRE(std::isfinite(got));
          CHECK(rel(got, hazard_oracle(a, b, g, x)) < 1e-9);
          CHECK(std::abs(log_cohort_hazard({a, b, g}, x) - std::log(got)) < 1e-9);
        }
}

TEST_CASE("plateau approaches b / gamma") {
  for (double g : {0.1, 0.2, 0.5})
    CHECK(std::abs(cohort_hazard({0.05, 0.1, g}, 500.0) - 0.1 / g) < 1e-9);
}

TEST_CASE("expected_deaths multiplies the midpoint hazard by exposure") {
  const GompertzCohortParams p{0.05, 0.1, 0.2};
  std::vector<double> e(25, 0.0);
  e[20] = 1e4;
  const auto mu = expected_deaths(p, {80, 25}, e);
  CHECK(mu[20] == doctest::Approx(1e4 * hazard_oracle(0.05, 0.1, 0.2, 20.5)).epsilon(1e-13));
  for (int k = 0; k < 25; ++k)
    if (k != 20) CHECK(mu[k] == 0.0);

  const std::vector<double> zeros(10, 0.0);
  for (double v : expected_deaths(p, {80, 10}, zeros)) CHECK(v == 0.0);

  // A cell with hazard 0.1 and exposure 1000 gives 100 deaths.
  const double x = 0.5;
  const double a = 0.1 / std::exp(0.1 * x);
  CHECK(expected_deaths({a, 0.1, 0.0}, {80, 1}, std::vector<double>{1000.0})[0] == doctest::Approx(100.0));
}

TEST_CASE("expected_deaths checks lengths") {
  CHECK_THROWS_AS((void)expected_deaths({0.05, 0.1, 0.2}, {80, 3}, std::vector<double>{1.0, 2.0}), ArgumentError);
}

TEST_CASE("expected_deaths grows with a at every age") {
  const std::vector<double> e(30, 5000.0);
  const auto lo = expected_deaths({0.04, 0.1, 0.3}, {80, 30}, e);
  const auto hi = expected_deaths({0.041, 0.1, 0.3}, {80, 30}, e);
  for (std::size_t k = 0; k < e.size(); ++k) CHECK(hi[k] > lo[k]);
}

TEST_CASE("age grid flags unsanctioned starts") {
  CHECK(AgeGrid{80, 25}.sanctioned_start());
  CHECK(AgeGrid{50, 60}.sanctioned_start());
  CHECK_FALSE(AgeGrid{75, 10}.sanctioned_start());
  CHECK_THROWS_AS(AgeGrid({80, 0}).validate(), ArgumentError);
}
