#pragma once

#include <span>
#include <vector>

namespace ggdrift::walk {

/// Random walk with drift on the log Gompertz slope, stored as increments.
///
///   X_0 = 0,  X_t = X_{t-1} + beta + w_t,  log b_t = log_b + X_t
///
/// `w[t-1]` is the innovation of the t-th observed cohort.
struct LatentWalk {
  double log_b = 0.0;
  double beta = 0.0;
  double sigma_rw = 1.0;
  std::vector<double> w;

  void validate() const;
  [[nodiscard]] std::size_t size() const noexcept { return w.size(); }
};

struct SlopeSeries {
  std::vector<double> b;
  std::vector<double> x;
  std::vector<int> cohorts;
};

/// Cumulative-sum reconstruction of X_t and b_t.
[[nodiscard]] SlopeSeries reconstruct(const LatentWalk& lw, std::span<const int> cohorts);

/// log b_t for t = 1..T without labels.
[[nodiscard]] std::vector<double> log_slopes(const LatentWalk& lw);

/// -log(2 scale) - |x - mu| / scale. Throws DomainError for scale <= 0.
[[nodiscard]] double laplace_logpdf(double x, double mu, double scale);

/// Sum of Laplace(0, sigma_rw) log densities of the innovations.
[[nodiscard]] double walk_logprior(const LatentWalk& lw);

}  // namespace ggdrift::walk
