#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ggdrift/gg_model.hpp"

namespace ggdrift {

/// Deaths and exposures on a cohort x age grid.
///
/// Cells are stored row-major by cohort. A cell with mask 0 is missing and
/// contributes nothing to the likelihood; its deaths and exposure are zero.
class CohortDataset {
 public:
  CohortDataset() = default;

  /// Throws ArgumentError on shape mismatch, negative values, or positive
  /// deaths on an observed cell with zero exposure.
  CohortDataset(model::AgeGrid grid, std::vector<int> cohorts, std::vector<std::int64_t> deaths,
                std::vector<double> exposures, std::vector<std::uint8_t> mask);

  [[nodiscard]] const model::AgeGrid& grid() const noexcept { return grid_; }
  [[nodiscard]] std::size_t n_cohorts() const noexcept { return cohorts_.size(); }
  [[nodiscard]] std::size_t n_ages() const noexcept { return static_cast<std::size_t>(grid_.n_ages); }
  [[nodiscard]] std::span<const int> cohorts() const noexcept { return cohorts_; }

  [[nodiscard]] std::span<const std::int64_t> deaths(std::size_t t) const;
  [[nodiscard]] std::span<const double> exposures(std::size_t t) const;
  [[nodiscard]] std::span<const std::uint8_t> mask(std::size_t t) const;

  [[nodiscard]] std::span<const std::int64_t> all_deaths() const noexcept { return deaths_; }
  [[nodiscard]] std::span<const double> all_exposures() const noexcept { return exposures_; }
  [[nodiscard]] std::span<const std::uint8_t> all_mask() const noexcept { return mask_; }

  [[nodiscard]] std::size_t observed_cells() const noexcept;
  [[nodiscard]] bool empty() const noexcept { return cohorts_.empty(); }

  /// Copy with every cell masked out; the likelihood becomes identically zero.
  [[nodiscard]] CohortDataset without_observations() const;
  /// Copy restricted to cohort rows [first, first + count).
  [[nodiscard]] CohortDataset slice(std::size_t first, std::size_t count) const;

  std::string country;
  std::string sex;

 private:
  model::AgeGrid grid_{};
  std::vector<int> cohorts_;
  std::vector<std::int64_t> deaths_;
  std::vector<double> exposures_;
  std::vector<std::uint8_t> mask_;
};

}  // namespace ggdrift
