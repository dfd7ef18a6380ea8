#include "ggdrift/kde.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ggdrift/errors.hpp"

namespace ggdrift::summary {

namespace {

// Kernel mass beyond this many bandwidths is ignored.
constexpr double kCutoff = 8.0;

double quantile_sorted(const std::vector<double>& s, double p) {
  const double pos = p * static_cast<double>(s.size() - 1);
  const auto i = static_cast<std::size_t>(std::floor(pos));
  const double frac = pos - static_cast<double>(i);
  if (i + 1 >= s.size()) return s.back();
  return s[i] + frac * (s[i + 1] - s[i]);
}

}  // namespace

void KdeSettings::validate() const {
  if (grid_points < 2) throw ArgumentError("kde.grid_points must be >= 2");
  if (!(bandwidth_adjust > 0.0) || !std::isfinite(bandwidth_adjust))
    throw ArgumentError("kde.bandwidth_adjust must be positive");
  if (bins < 16) throw ArgumentError("kde.bins must be >= 16");
}

double silverman_bandwidth(std::span<const double> draws) {
  const std::size_t n = draws.size();
  if (n < 2) throw ArgumentError("bandwidth needs at least 2 draws");
  double mean = 0.0;
  for (double x : draws) mean += x;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double x : draws) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  std::vector<double> s(draws.begin(), draws.end());
  std::sort(s.begin(), s.end());
  const double iqr = quantile_sorted(s, 0.75) - quantile_sorted(s, 0.25);
  double spread = std::min(sd, iqr / 1.34);
  if (!(spread > 0.0)) spread = sd;
  if (!(spread > 0.0)) spread = std::abs(s.front()) > 0.0 ? std::abs(s.front()) : 1.0;
  return 0.9 * spread * std::pow(static_cast<double>(n), -0.2);
}

Kde::Kde(std::span<const double> draws, const KdeSettings& settings) {
  settings.validate();
  if (draws.size() < 2) throw ArgumentError("kde needs at least 2 draws");
  for (double x : draws)
    if (!std::isfinite(x)) throw DomainError("kde input must be finite");
  h_ = settings.bandwidth_adjust * silverman_bandwidth(draws);
  const auto [mn, mx] = std::minmax_element(draws.begin(), draws.end());
  lo_ = *mn;
  hi_ = *mx;
  n_ = static_cast<double>(draws.size());

  bin_lo_ = lo_;
  const int nb = settings.bins;
  bin_step_ = (hi_ - lo_) / (nb - 1);
  weights_.assign(static_cast<std::size_t>(nb), 0.0);
  if (bin_step_ > 0.0) {
    for (double x : draws) {
      const double pos = (x - bin_lo_) / bin_step_;
      auto i = static_cast<std::size_t>(std::floor(pos));
      if (i >= static_cast<std::size_t>(nb - 1)) i = static_cast<std::size_t>(nb - 2);
      const double frac = pos - static_cast<double>(i);
      weights_[i] += 1.0 - frac;
      weights_[i + 1] += frac;
    }
  } else {
    weights_[0] = n_;
  }

  const int g = settings.grid_points;
  grid_.resize(static_cast<std::size_t>(g));
  density_.resize(static_cast<std::size_t>(g));
  for (int k = 0; k < g; ++k) {
    grid_[static_cast<std::size_t>(k)] = lo_ + (hi_ - lo_) * k / (g - 1);
    density_[static_cast<std::size_t>(k)] = (*this)(grid_[static_cast<std::size_t>(k)]);
  }
}

double Kde::operator()(double x) const {
  const double reach = kCutoff * h_;
  std::size_t first = 0;
  std::size_t last = weights_.size();
  if (bin_step_ > 0.0) {
    const double lo = std::floor((x - reach - bin_lo_) / bin_step_);
    const double hi = std::ceil((x + reach - bin_lo_) / bin_step_) + 1.0;
    if (hi <= 0.0 || lo >= static_cast<double>(weights_.size())) return 0.0;
    first = lo > 0.0 ? static_cast<std::size_t>(lo) : 0;
    last = std::min(weights_.size(), static_cast<std::size_t>(hi));
  } else {
    last = 1;
  }
  double sum = 0.0;
  for (std::size_t i = first; i < last; ++i) {
    if (weights_[i] == 0.0) continue;
    const double u = (x - (bin_lo_ + static_cast<double>(i) * bin_step_)) / h_;
    sum += weights_[i] * std::exp(-0.5 * u * u);
  }
  return sum / (n_ * h_ * std::sqrt(2.0 * std::numbers::pi));
}

double Kde::argmax() const {
  return grid_[static_cast<std::size_t>(std::max_element(density_.begin(), density_.end()) - density_.begin())];
}

double Kde::max_density() const { return *std::max_element(density_.begin(), density_.end()); }

}  // namespace ggdrift::summary
