#include "ggdrift/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <boost/math/distributions/normal.hpp>

#include "ggdrift/errors.hpp"

namespace ggdrift::mcmc {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_shape(const std::vector<std::vector<double>>& chains, std::size_t min_chains,
                 std::size_t min_len) {
  if (chains.size() < min_chains)
    throw ArgumentError("need at least " + std::to_string(min_chains) + " chains");
  const std::size_t n = chains.front().size();
  for (const auto& c : chains)
    if (c.size() != n) throw ArgumentError("chains must have equal length");
  if (n < min_len) throw ArgumentError("need at least " + std::to_string(min_len) + " draws per chain");
}

std::vector<std::vector<double>> split(const std::vector<std::vector<double>>& chains) {
  std::vector<std::vector<double>> out;
  const std::size_t half = chains.front().size() / 2;
  const std::size_t n = chains.front().size();
  for (const auto& c : chains) {
    out.emplace_back(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(half));
    out.emplace_back(c.begin() + static_cast<std::ptrdiff_t>(n - half), c.end());
  }
  return out;
}

bool constant(const std::vector<std::vector<double>>& chains) {
  const double first = chains.front().front();
  for (const auto& c : chains)
    for (double v : c)
      if (v != first) return false;
  return true;
}

double mean(std::span<const double> x) {
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double variance(std::span<const double> x) {
  const double m = mean(x);
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return s / static_cast<double>(x.size() - 1);
}

Diagnostic classic_rhat(const std::vector<std::vector<double>>& chains) {
  const auto m = static_cast<double>(chains.size());
  const auto n = static_cast<double>(chains.front().size());
  std::vector<double> means, vars;
  for (const auto& c : chains) {
    means.push_back(mean(c));
    vars.push_back(variance(c));
  }
  const double w = std::accumulate(vars.begin(), vars.end(), 0.0) / m;
  const double b_over_n = variance(means);
  if (!(w > 0.0)) return {kNaN, true};
  const double var_plus = (n - 1.0) / n * w + b_over_n;
  return {std::sqrt(var_plus / w), false};
}

std::vector<std::vector<double>> rank_normalize(const std::vector<std::vector<double>>& chains) {
  std::vector<std::pair<double, std::size_t>> all;
  const std::size_t n = chains.front().size();
  for (std::size_t c = 0; c < chains.size(); ++c)
    for (std::size_t i = 0; i < n; ++i) all.emplace_back(chains[c][i], c * n + i);
  std::sort(all.begin(), all.end());
  const auto total = static_cast<double>(all.size());
  std::vector<double> ranks(all.size());
  for (std::size_t i = 0; i < all.size();) {
    std::size_t j = i;
    while (j + 1 < all.size() && all[j + 1].first == all[i].first) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[all[k].second] = avg;
    i = j + 1;
  }
  const boost::math::normal_distribution<double> normal;
  std::vector<std::vector<double>> z(chains.size(), std::vector<double>(n));
  for (std::size_t c = 0; c < chains.size(); ++c)
    for (std::size_t i = 0; i < n; ++i)
      z[c][i] = boost::math::quantile(normal, (ranks[c * n + i] - 0.375) / (total + 0.25));
  return z;
}

// Autocovariance of x at lags 0..max_lag (biased, divided by n).
double autocov(std::span<const double> x, double m, std::size_t lag) {
  double s = 0.0;
  for (std::size_t i = 0; i + lag < x.size(); ++i) s += (x[i] - m) * (x[i + lag] - m);
  return s / static_cast<double>(x.size());
}

}  // namespace

Diagnostic split_rhat(const std::vector<std::vector<double>>& chains) {
  check_shape(chains, 2, 4);
  if (constant(chains)) return {kNaN, true};
  return classic_rhat(split(rank_normalize(chains)));
}

Diagnostic split_rhat_classic(const std::vector<std::vector<double>>& chains) {
  check_shape(chains, 2, 4);
  if (constant(chains)) return {kNaN, true};
  return classic_rhat(split(chains));
}

Diagnostic effective_sample_size(const std::vector<std::vector<double>>& chains) {
  check_shape(chains, 1, 4);
  const auto m = static_cast<double>(chains.size());
  const std::size_t n = chains.front().size();
  const double total = m * static_cast<double>(n);
  if (constant(chains)) return {kNaN, true};

  std::vector<double> means;
  double w = 0.0;
  for (const auto& c : chains) {
    means.push_back(mean(c));
    w += variance(c);
  }
  w /= m;
  const double b_over_n = chains.size() > 1 ? variance(means) : 0.0;
  const double nd = static_cast<double>(n);
  const double var_plus = (nd - 1.0) / nd * w + b_over_n;
  if (!(var_plus > 0.0)) return {kNaN, true};

  auto rho = [&](std::size_t lag) {
    double acov = 0.0;
    for (std::size_t c = 0; c < chains.size(); ++c) acov += autocov(chains[c], means[c], lag);
    acov /= m;
    return 1.0 - (w - acov) / var_plus;
  };

  // Geyer's initial positive sequence over lag pairs (0,1), (2,3), ...
  double sum_pairs = 0.0;
  for (std::size_t lag = 0; lag + 1 < n; lag += 2) {
    const double pair = (lag == 0 ? 1.0 : rho(lag)) + rho(lag + 1);
    if (pair < 0.0) break;
    sum_pairs += pair;
  }
  const double tau = std::max(-1.0 + 2.0 * sum_pairs, 1.0 / std::log10(total));
  return {std::min(total / tau, total), false};
}

Diagnostic effective_sample_size(std::span<const double> draws) {
  return effective_sample_size(std::vector<std::vector<double>>{{draws.begin(), draws.end()}});
}

}  // namespace ggdrift::mcmc
