#pragma once

#include <span>
#include <vector>

namespace ggdrift::summary {

struct KdeSettings {
  /// Evaluation grid size over [min draw, max draw].
  int grid_points = 512;
  /// Multiplier on the Silverman bandwidth.
  double bandwidth_adjust = 1.0;
  /// Linear-binning resolution used for the density sums.
  int bins = 4096;

  void validate() const;
};

/// Silverman's rule of thumb: 0.9 min(sd, IQR/1.34) n^(-1/5). Falls back to
/// the sd (or to 1e-12) when the IQR (or both) vanish.
[[nodiscard]] double silverman_bandwidth(std::span<const double> draws);

/// Gaussian kernel density estimate on linearly binned draws.
class Kde {
 public:
  Kde(std::span<const double> draws, const KdeSettings& settings = {});

  [[nodiscard]] double bandwidth() const noexcept { return h_; }
  [[nodiscard]] double lower() const noexcept { return lo_; }
  [[nodiscard]] double upper() const noexcept { return hi_; }
  [[nodiscard]] double operator()(double x) const;

  /// The evaluation grid spanning the draw range and the density on it.
  [[nodiscard]] const std::vector<double>& grid() const noexcept { return grid_; }
  [[nodiscard]] const std::vector<double>& density() const noexcept { return density_; }
  /// Grid point of highest density; the lowest one on ties.
  [[nodiscard]] double argmax() const;
  [[nodiscard]] double max_density() const;

 private:
  double h_ = 0.0;
  double lo_ = 0.0;
  double hi_ = 0.0;
  double bin_lo_ = 0.0;
  double bin_step_ = 0.0;
  double n_ = 0.0;
  std::vector<double> weights_;
  std::vector<double> grid_;
  std::vector<double> density_;
};

}  // namespace ggdrift::summary
