#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ggdrift/dataset.hpp"
#include "ggdrift/mcmc.hpp"

namespace ggdrift::diag {

enum class QqCenter { Mean, Median };

struct QqSettings {
  int n_rep = 500;
  /// Posterior draws, evenly spaced over the pooled chains, that feed the replicates.
  int n_draws = 500;
  /// Pointwise mass of the replicate envelope.
  double envelope = 0.99;
  QqCenter center = QqCenter::Mean;
  std::uint64_t seed = 1;

  void validate() const;
};

/// Observed versus posterior-predictive quantiles of the observed death counts.
struct QqSeries {
  std::string label;
  /// (k - 0.5) / n for k = 1..n.
  std::vector<double> levels;
  std::vector<double> observed;
  std::vector<double> predicted;
  std::vector<double> lower;
  std::vector<double> upper;

  [[nodiscard]] std::size_t size() const noexcept { return levels.size(); }
  /// Share of levels whose observed quantile lies inside [lower, upper].
  [[nodiscard]] double coverage() const;
};

/// Replicates the observed cells from Poisson(lambda E) under posterior draws.
/// Replicate r uses the (r mod n_draws)-th selected draw. Each replicate is
/// sorted; the predicted curve is the mean (or median) of the sorted
/// replicates and the envelope their pointwise central quantiles.
/// Throws ArgumentError on an empty dataset or n_rep < 100.
[[nodiscard]] QqSeries posterior_predictive_qq(const mcmc::PosteriorDraws& draws, const CohortDataset& data,
                                               const QqSettings& settings = {});

void write_qq_csv(std::ostream& os, const QqSeries& qq);

}  // namespace ggdrift::diag
