#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ggdrift/dataset.hpp"
#include "ggdrift/posterior.hpp"
#include "ggdrift/rng.hpp"

namespace ggdrift::mcmc {

/// Which parameter groups the sampler moves. Frozen groups keep their
/// initial values.
struct UpdateSwitches {
  bool a = true;
  bool gamma = true;
  bool walk = true;
  bool hyper = true;
};

struct SamplerConfig {
  int n_chains = 4;
  int n_iter = 6000;
  int n_warmup = 4000;
  std::uint64_t seed = 20260101;
  /// Acceptance target of every one-dimensional move.
  double target_accept = 0.44;
  /// Acceptance target of the multi-dimensional block moves.
  double block_target_accept = 0.30;
  /// Robbins-Monro step gain * (k + 1)^-decay on the log proposal scale.
  double adapt_gain = 1.0;
  double adapt_decay = 0.6;
  /// Warm-up draws collected before block proposals start.
  int block_adapt_start = 200;
  /// Cohort block moves per cohort per sweep.
  int block_repeats = 3;
  /// Fractions of warm-up at which the block covariance estimate restarts,
  /// discarding draws from the initial transient.
  std::vector<double> covariance_restarts{0.15, 0.4};
  int max_init_attempts = 100;
  /// Spread of the per-chain starting points; 0 starts every chain at the same point.
  double init_jitter = 1.0;
  /// Worker threads for chains; 0 uses the hardware concurrency.
  int threads = 0;
  UpdateSwitches update;
  /// Starting point; defaults are derived from the data when absent.
  std::optional<posterior::ModelParameters> initial;

  void validate() const;
  [[nodiscard]] int n_draws() const noexcept { return n_iter - n_warmup; }
};

/// Robbins-Monro adaptation of a log proposal scale toward a target
/// acceptance rate. Once frozen the scale is fixed.
class ScaleAdapter {
 public:
  ScaleAdapter() = default;
  ScaleAdapter(double initial_scale, double target, double gain, double decay);

  [[nodiscard]] double scale() const noexcept { return std::exp(log_scale_); }
  void update(bool accepted) noexcept;
  void freeze() noexcept { frozen_ = true; }
  [[nodiscard]] bool frozen() const noexcept { return frozen_; }
  [[nodiscard]] std::uint64_t updates() const noexcept { return updates_; }
  /// Updates requested after freeze(); they are ignored.
  [[nodiscard]] std::uint64_t late_updates() const noexcept { return late_updates_; }

 private:
  double log_scale_ = 0.0;
  double target_ = 0.44;
  double gain_ = 1.0;
  double decay_ = 0.6;
  std::uint64_t updates_ = 0;
  std::uint64_t late_updates_ = 0;
  bool frozen_ = false;
};

inline constexpr std::size_t kMaxBlockDim = 8;

/// Adaptive multivariate random-walk proposal: empirical covariance of the
/// observed states times a Robbins-Monro adapted scale.
class CovarianceAdapter {
 public:
  CovarianceAdapter() = default;
  CovarianceAdapter(std::vector<double> initial_sd, double target, double gain, double decay);

  [[nodiscard]] std::size_t dim() const noexcept { return static_cast<std::size_t>(mean_.size()); }
  void observe(std::span<const double> x);
  /// Recomputes the Cholesky factor from the running covariance.
  void refresh();
  /// Drops the accumulated moments; the current proposal shape is kept.
  void reset() noexcept;
  void propose(Random& rng, std::span<double> step) const;
  void update(bool accepted) noexcept { scale_.update(accepted); }
  void freeze() noexcept { scale_.freeze(); frozen_ = true; }
  [[nodiscard]] std::uint64_t observations() const noexcept { return count_; }
  [[nodiscard]] const ScaleAdapter& scale() const noexcept { return scale_; }

 private:
  Eigen::VectorXd mean_;
  Eigen::MatrixXd m2_;
  Eigen::MatrixXd chol_;
  std::uint64_t count_ = 0;
  ScaleAdapter scale_;
  bool frozen_ = false;
};

struct MoveStats {
  std::uint64_t proposed = 0;
  std::uint64_t accepted = 0;
  [[nodiscard]] double rate() const noexcept {
    return proposed == 0 ? 0.0 : static_cast<double>(accepted) / static_cast<double>(proposed);
  }
};

struct ChainStats {
  std::uint64_t seed = 0;
  /// Post-warm-up acceptance per move family.
  std::map<std::string, MoveStats> moves;
  /// Adaptation updates attempted after warm-up; always zero for a valid run.
  std::uint64_t late_adaptation_updates = 0;
  /// Iteration at which every adapter was frozen.
  int frozen_at = -1;
  int init_attempts = 0;
};

/// Retained draws of every chain on the constrained scale.
///
/// Columns are a[1..T], gamma[1..T], w[1..T], log_b, beta, sigma_rw.
class PosteriorDraws {
 public:
  PosteriorDraws() = default;
  PosteriorDraws(std::size_t n_chains, std::size_t n_draws, std::size_t n_cohorts);

  [[nodiscard]] std::size_t n_chains() const noexcept { return n_chains_; }
  [[nodiscard]] std::size_t n_draws() const noexcept { return n_draws_; }
  [[nodiscard]] std::size_t n_cohorts() const noexcept { return n_cohorts_; }
  [[nodiscard]] std::size_t n_params() const noexcept { return 3 * n_cohorts_ + 3; }
  [[nodiscard]] std::size_t total_draws() const noexcept { return n_chains_ * n_draws_; }

  [[nodiscard]] std::size_t a_index(std::size_t t) const noexcept { return t; }
  [[nodiscard]] std::size_t gamma_index(std::size_t t) const noexcept { return n_cohorts_ + t; }
  [[nodiscard]] std::size_t w_index(std::size_t t) const noexcept { return 2 * n_cohorts_ + t; }
  [[nodiscard]] std::size_t log_b_index() const noexcept { return 3 * n_cohorts_; }
  [[nodiscard]] std::size_t beta_index() const noexcept { return 3 * n_cohorts_ + 1; }
  [[nodiscard]] std::size_t sigma_index() const noexcept { return 3 * n_cohorts_ + 2; }

  [[nodiscard]] std::vector<std::string> names() const;
  /// Column index for a name such as "a[3]" or "beta"; throws ArgumentError if unknown.
  [[nodiscard]] std::size_t index_of(const std::string& name) const;

  [[nodiscard]] std::span<double> row(std::size_t chain, std::size_t draw);
  [[nodiscard]] std::span<const double> row(std::size_t chain, std::size_t draw) const;
  [[nodiscard]] double at(std::size_t chain, std::size_t draw, std::size_t param) const {
    return values_[(chain * n_draws_ + draw) * n_params() + param];
  }

  /// One series per chain.
  [[nodiscard]] std::vector<std::vector<double>> chains(std::size_t param) const;
  /// All chains concatenated in chain order.
  [[nodiscard]] std::vector<double> pooled(std::size_t param) const;
  /// Applies `f` to every draw, returning one series per chain.
  [[nodiscard]] std::vector<std::vector<double>> derived(
      const std::function<double(std::span<const double>)>& f) const;

  [[nodiscard]] posterior::ModelParameters params(std::size_t chain, std::size_t draw) const;
  /// log a, log gamma, w, log_b, beta, log sigma_rw.
  [[nodiscard]] std::vector<double> unconstrained(std::size_t chain, std::size_t draw) const;
  /// log b_t of one draw, t = 1..T.
  [[nodiscard]] std::vector<double> log_slopes(std::size_t chain, std::size_t draw) const;

  std::vector<ChainStats> stats;

 private:
  std::size_t n_chains_ = 0;
  std::size_t n_draws_ = 0;
  std::size_t n_cohorts_ = 0;
  std::vector<double> values_;
};

/// Default starting point: crude death rates for a_t, log b = log 0.1,
/// beta = 0, w = 0, gamma_t = 0.5, sigma_rw = 0.05.
[[nodiscard]] posterior::ModelParameters default_initial(const CohortDataset& data);

/// Total log target on the sampler's coordinates: log posterior plus the
/// log-Jacobian of the a, gamma and sigma_rw log transforms.
[[nodiscard]] double log_target(const posterior::ModelParameters& params, const CohortDataset& data,
                                const posterior::PriorConfig& priors);

/// Runs independent adaptive Metropolis-within-Gibbs chains.
///
/// Each iteration sweeps the cohorts with one-dimensional moves on log a_t,
/// log gamma_t and the cohort's log-slope level (w_t up, w_{t+1} down), then a
/// block move on all three; then moves log_b, beta and log sigma_rw with the
/// slopes held fixed, a joint (log_b, beta) move with the innovations held
/// fixed, and a joint rescaling of sigma_rw and the innovations. Proposal
/// scales adapt during warm-up only.
///
/// Throws FitError when no finite starting point is found.
[[nodiscard]] PosteriorDraws run_chains(const CohortDataset& data, const SamplerConfig& cfg,
                                        const posterior::PriorConfig& priors = {});

/// Draws from a generic log density on R^d, for small test targets.
struct GenericDraws {
  std::size_t n_chains = 0;
  std::size_t n_draws = 0;
  std::size_t dim = 0;
  std::vector<double> values;  // [chain][draw][dim]

  [[nodiscard]] std::vector<std::vector<double>> chains(std::size_t coord) const;
  [[nodiscard]] std::vector<double> pooled(std::size_t coord) const;
};

using LogDensity = std::function<double(std::span<const double>)>;

/// Component-wise adaptive Metropolis on an arbitrary density, using the
/// same adapters and schedule as run_chains.
[[nodiscard]] GenericDraws run_generic(const LogDensity& log_density, std::vector<double> initial,
                                       const SamplerConfig& cfg);

}  // namespace ggdrift::mcmc
