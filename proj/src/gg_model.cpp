#include "ggdrift/gg_model.hpp"

#include <cmath>
#include <string>

#include "ggdrift/errors.hpp"

namespace ggdrift::model {

namespace {

constexpr double kStableSwitch = 30.0;

void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) throw DomainError(std::string(name) + " must be finite");
}

}  // namespace

void GompertzCohortParams::validate() const {
  require_finite(a, "a");
  require_finite(b, "b");
  require_finite(gamma, "gamma");
  if (a <= 0.0) throw DomainError("a must be > 0");
  if (b <= 0.0) throw DomainError("b must be > 0");
  if (gamma < 0.0) throw DomainError("gamma must be >= 0");
}

void AgeGrid::validate() const {
  if (n_ages < 1) throw ArgumentError("age grid needs at least one age group");
}

bool AgeGrid::sanctioned_start() const noexcept {
  return start_age == 50 || start_age == 60 || start_age == 70 || start_age == 80;
}

double individual_hazard(double z, const GompertzCohortParams& p, double x) {
  require_finite(z, "z");
  require_finite(x, "x");
  p.validate();
  if (z < 0.0) throw DomainError("frailty must be >= 0");
  if (x < 0.0) throw DomainError("age offset must be >= 0");
  return z * p.a * std::exp(p.b * x);
}

double cohort_hazard(const GompertzCohortParams& p, double x) {
  require_finite(x, "x");
  p.validate();
  if (x < 0.0) throw DomainError("age offset must be >= 0");
  const double bx = p.b * x;
  const double c = p.gamma * p.a / p.b;
  if (bx <= kStableSwitch) return p.a * std::exp(bx) / (1.0 + c * std::expm1(bx));
  return p.a / (std::exp(-bx) - c * std::expm1(-bx));
}

double log_cohort_hazard(const GompertzCohortParams& p, double x) {
  require_finite(x, "x");
  p.validate();
  if (x < 0.0) throw DomainError("age offset must be >= 0");
  const double bx = p.b * x;
  const double c = p.gamma * p.a / p.b;
  if (bx <= kStableSwitch) return std::log(p.a) + bx - std::log1p(c * std::expm1(bx));
  return std::log(p.a) - std::log(std::exp(-bx) - c * std::expm1(-bx));
}

std::vector<double> expected_deaths(const GompertzCohortParams& p, const AgeGrid& grid,
                                    std::span<const double> exposures) {
  grid.validate();
  if (exposures.size() != static_cast<std::size_t>(grid.n_ages))
    throw ArgumentError("exposures length " + std::to_string(exposures.size()) +
                        " does not match age grid of " + std::to_string(grid.n_ages));
  std::vector<double> out(exposures.size());
  for (int k = 0; k < grid.n_ages; ++k) {
    const double e = exposures[k];
    if (!(e >= 0.0)) throw DomainError("exposures must be >= 0");
    out[k] = e == 0.0 ? 0.0 : cohort_hazard(p, AgeGrid::midpoint(k)) * e;
  }
  return out;
}

}  // namespace ggdrift::model
