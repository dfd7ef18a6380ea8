#pragma once

#include <span>
#include <vector>

namespace ggdrift::mcmc {

/// A diagnostic value; `degenerate` is set (and value is NaN) when the input
/// has zero variance.
struct Diagnostic {
  double value = 0.0;
  bool degenerate = false;
};

/// Rank-normalized split R-hat.
///
/// Each chain is split in half, all draws are ranked jointly (average ranks
/// for ties), ranks are mapped to normal scores with the (r - 3/8)/(S + 1/4)
/// offset, and the classic potential scale reduction is computed on the
/// scores. Needs >= 2 chains of equal length >= 4.
[[nodiscard]] Diagnostic split_rhat(const std::vector<std::vector<double>>& chains);

/// Classic (non-rank) split R-hat, exposed for comparison.
[[nodiscard]] Diagnostic split_rhat_classic(const std::vector<std::vector<double>>& chains);

/// Multi-chain effective sample size from the autocorrelation sum, truncated
/// at the first negative sum of an adjacent lag pair. Never exceeds the total
/// draw count.
[[nodiscard]] Diagnostic effective_sample_size(const std::vector<std::vector<double>>& chains);

/// Single-series convenience overload.
[[nodiscard]] Diagnostic effective_sample_size(std::span<const double> draws);

}  // namespace ggdrift::mcmc
