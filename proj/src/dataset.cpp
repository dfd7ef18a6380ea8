#include "ggdrift/dataset.hpp"

#include <algorithm>
#include <cmath>

#include "ggdrift/errors.hpp"

namespace ggdrift {

CohortDataset::CohortDataset(model::AgeGrid grid, std::vector<int> cohorts,
                             std::vector<std::int64_t> deaths, std::vector<double> exposures,
                             std::vector<std::uint8_t> mask)
    : grid_(grid),
      cohorts_(std::move(cohorts)),
      deaths_(std::move(deaths)),
      exposures_(std::move(exposures)),
      mask_(std::move(mask)) {
  grid_.validate();
  const std::size_t cells = cohorts_.size() * n_ages();
  if (deaths_.size() != cells || exposures_.size() != cells || mask_.size() != cells)
    throw ArgumentError("deaths, exposures and mask must each hold n_cohorts * n_ages = " +
                        std::to_string(cells) + " cells");
  for (std::size_t i = 0; i < cells; ++i) {
    if (deaths_[i] < 0) throw ArgumentError("negative death count at cell " + std::to_string(i));
    if (!(exposures_[i] >= 0.0) || !std::isfinite(exposures_[i]))
      throw ArgumentError("exposure must be finite and >= 0 at cell " + std::to_string(i));
    if (mask_[i] > 1) throw ArgumentError("mask entries must be 0 or 1");
    if (mask_[i] == 0) {
      deaths_[i] = 0;
      exposures_[i] = 0.0;
    } else if (exposures_[i] == 0.0 && deaths_[i] > 0) {
      throw ArgumentError("positive deaths with zero exposure at cell " + std::to_string(i));
    }
  }
}

std::span<const std::int64_t> CohortDataset::deaths(std::size_t t) const {
  return std::span<const std::int64_t>(deaths_).subspan(t * n_ages(), n_ages());
}

std::span<const double> CohortDataset::exposures(std::size_t t) const {
  return std::span<const double>(exposures_).subspan(t * n_ages(), n_ages());
}

std::span<const std::uint8_t> CohortDataset::mask(std::size_t t) const {
  return std::span<const std::uint8_t>(mask_).subspan(t * n_ages(), n_ages());
}

std::size_t CohortDataset::observed_cells() const noexcept {
  return static_cast<std::size_t>(std::count(mask_.begin(), mask_.end(), std::uint8_t{1}));
}

CohortDataset CohortDataset::without_observations() const {
  CohortDataset out(grid_, cohorts_, std::vector<std::int64_t>(deaths_.size(), 0),
                    std::vector<double>(exposures_.size(), 0.0),
                    std::vector<std::uint8_t>(mask_.size(), 0));
  out.country = country;
  out.sex = sex;
  return out;
}

CohortDataset CohortDataset::slice(std::size_t first, std::size_t count) const {
  if (first + count > n_cohorts()) throw ArgumentError("cohort slice out of range");
  const auto lo = static_cast<std::ptrdiff_t>(first * n_ages());
  const auto hi = static_cast<std::ptrdiff_t>((first + count) * n_ages());
  CohortDataset out(grid_,
                    std::vector<int>(cohorts_.begin() + static_cast<std::ptrdiff_t>(first),
                                     cohorts_.begin() + static_cast<std::ptrdiff_t>(first + count)),
                    std::vector<std::int64_t>(deaths_.begin() + lo, deaths_.begin() + hi),
                    std::vector<double>(exposures_.begin() + lo, exposures_.begin() + hi),
                    std::vector<std::uint8_t>(mask_.begin() + lo, mask_.begin() + hi));
  out.country = country;
  out.sex = sex;
  return out;
}

}  // namespace ggdrift
