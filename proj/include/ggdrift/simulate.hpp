#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ggdrift/dataset.hpp"
#include "ggdrift/latent_drift.hpp"
#include "ggdrift/posterior.hpp"

namespace ggdrift::sim {

/// Ground truth for a synthetic dataset. Defaults give the desk-scale
/// scenario: 60 cohorts, ages 80-104, exposures 1e5 falling 2% per age,
/// a from 0.06 to 0.04, gamma 0.15, b 0.105, no drift, sigma_rw 0.04.
struct TruthScenario {
  int n_cohorts = 60;
  int n_ages = 25;
  int start_age = 80;
  int first_cohort = 1850;
  double b = 0.105;
  double beta = 0.0;
  double sigma_rw = 0.04;
  /// a_t moves log-linearly from a_first (t = 1) to a_last (t = T).
  double a_first = 0.06;
  double a_last = 0.04;
  /// Used for every cohort unless gamma_per_cohort is set.
  double gamma = 0.15;
  std::vector<double> gamma_per_cohort;
  /// Exposure of age offset k: exposure_base * (1 - exposure_decline)^k,
  /// unless a full cohort-major matrix is given.
  double exposure_base = 1e5;
  double exposure_decline = 0.02;
  std::vector<double> exposures;
  std::uint64_t seed = 1;

  /// Throws ArgumentError naming the offending field.
  void validate() const;
  [[nodiscard]] double a_at(int t) const;
  [[nodiscard]] double gamma_at(int t) const;
  [[nodiscard]] double exposure_at(int t, int k) const;
};

/// Laplace(0, sigma_rw) innovations by inverse CDF; all zero when sigma_rw = 0.
[[nodiscard]] walk::LatentWalk draw_walk(const TruthScenario& scenario);

struct Simulated {
  CohortDataset data;
  /// The parameters the deaths were drawn from.
  posterior::ModelParameters truth;
};

/// Poisson deaths with mean expected_deaths under the drawn walk.
[[nodiscard]] Simulated generate_dataset(const TruthScenario& scenario);

/// Truth as JSON: scenario constants plus a, gamma, w and the implied b_t.
[[nodiscard]] std::string truth_json(const TruthScenario& scenario, const Simulated& sim);

}  // namespace ggdrift::sim
