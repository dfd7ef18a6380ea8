#pragma once

#include <span>
#include <vector>

namespace ggdrift::model {

/// Gamma-Gompertz parameters of one cohort.
///
/// `a` is the baseline hazard at the grid's starting age, `b` the Gompertz
/// slope per year of age and `gamma` the variance of the mean-one gamma frailty.
struct GompertzCohortParams {
  double a = 0.0;
  double b = 0.0;
  double gamma = 0.0;

  /// Throws DomainError unless a > 0, b > 0, gamma >= 0 and all are finite.
  void validate() const;
};

/// One-year age groups starting at `start_age`; offsets run 0..n_ages-1.
struct AgeGrid {
  int start_age = 80;
  int n_ages = 0;

  void validate() const;
  /// True for the starting ages used by the sanctioned selection rules.
  [[nodiscard]] bool sanctioned_start() const noexcept;
  /// Offset at which the Poisson rate of age group k is evaluated.
  [[nodiscard]] static constexpr double midpoint(int k) noexcept { return k + 0.5; }
};

/// z * a * exp(b x).
[[nodiscard]] double individual_hazard(double z, const GompertzCohortParams& p, double x);

/// Marginal hazard of a gamma-frail Gompertz cohort:
///
///   a e^{bx} / (1 + gamma (a/b) (e^{bx} - 1))
///
/// For b x > 30 the exponential is factored out of numerator and denominator.
[[nodiscard]] double cohort_hazard(const GompertzCohortParams& p, double x);

/// log of cohort_hazard, evaluated without forming e^{bx}.
[[nodiscard]] double log_cohort_hazard(const GompertzCohortParams& p, double x);

/// Expected deaths per age group: cohort_hazard at the interval midpoint
/// times exposure.
[[nodiscard]] std::vector<double> expected_deaths(const GompertzCohortParams& p,
                                                  const AgeGrid& grid,
                                                  std::span<const double> exposures);

}  // namespace ggdrift::model
