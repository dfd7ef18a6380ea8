#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "ggdrift/dataset.hpp"
#include "ggdrift/latent_drift.hpp"

namespace ggdrift::posterior {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// Prior constants. The two switches select how the second argument of the
/// Normal and Gamma priors is read.
struct PriorConfig {
  double a_scale = 1.0;
  double gamma_shape = 1.0;
  double gamma_second = 0.5;
  bool gamma_second_is_rate = true;
  double log_b_mean = 0.0;
  double log_b_second = 2.0;
  double beta_mean = 0.0;
  double beta_second = 2.0;
  bool normal_second_is_sd = true;
  double sigma_scale = 1.0;

  [[nodiscard]] double log_b_sd() const noexcept;
  [[nodiscard]] double beta_sd() const noexcept;
  [[nodiscard]] double gamma_rate() const noexcept;
  void validate() const;
};

/// One point in parameter space on the constrained scale.
struct ModelParameters {
  std::vector<double> a;
  std::vector<double> gamma;
  walk::LatentWalk walk;

  [[nodiscard]] std::size_t n_cohorts() const noexcept { return a.size(); }
  /// Throws DomainError on a broken positivity constraint or length mismatch.
  void validate() const;
};

// Scalar log densities. Each returns -inf outside its support.
[[nodiscard]] double normal_logpdf(double x, double mean, double sd);
[[nodiscard]] double half_normal_logpdf(double x, double scale);
[[nodiscard]] double gamma_logpdf(double x, double shape, double rate);
[[nodiscard]] double poisson_logpmf(std::int64_t k, double mean);

/// Per-cohort Poisson log-likelihood with constants precomputed.
///
/// Evaluating one cohort costs one division per observed cell plus one log
/// per cell with positive deaths.
class LikelihoodCache {
 public:
  explicit LikelihoodCache(const CohortDataset& data);

  [[nodiscard]] std::size_t n_cohorts() const noexcept { return cohorts_.size(); }
  [[nodiscard]] double cohort(std::size_t t, double a, double b, double gamma) const;
  [[nodiscard]] double total(const ModelParameters& params) const;

 private:
  struct Row {
    std::vector<double> deaths;
    std::vector<double> exposure;
    double constant = 0.0;
    int last_age = -1;
  };
  std::vector<Row> cohorts_;
};

/// Sum over observed cells of log Poisson(D; lambda E), lambda at the
/// interval midpoint. Returns -inf when an observed count has zero rate.
[[nodiscard]] double log_likelihood(const ModelParameters& params, const CohortDataset& data);

/// Log prior density of the constrained parameters; -inf outside the support.
[[nodiscard]] double log_prior(const ModelParameters& params, const PriorConfig& priors = {});

[[nodiscard]] double log_posterior(const ModelParameters& params, const CohortDataset& data,
                                   const PriorConfig& priors = {});

}  // namespace ggdrift::posterior
