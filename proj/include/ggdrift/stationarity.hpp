#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace ggdrift::diag {

enum class StationarityTest { Adf, Kpss };

struct StationarityResult {
  StationarityTest test = StationarityTest::Adf;
  double statistic = 0.0;
  /// Interpolated from the embedded critical-value table and clamped to
  /// [0.001, 0.999]; values beyond the table edge stick to the edge level.
  double p_value = 0.0;
  /// One of "<=0.01", "0.01-0.05", "0.05-0.10", ">=0.10".
  std::string bracket;
  /// Rejection of the test's own null at 5%: a unit root for ADF,
  /// stationarity for KPSS.
  bool reject_5pct = false;
  int lags = 0;
  std::size_t n_obs = 0;
  /// Constant input (or an exact fit); the statistic carries no information.
  bool degenerate = false;

  [[nodiscard]] std::string name() const { return test == StationarityTest::Adf ? "ADF" : "KPSS"; }
};

/// MacKinnon response-surface critical value (constant, no trend) at level
/// 0.01, 0.05 or 0.10 for a regression with nobs rows.
[[nodiscard]] double adf_critical_value(double level, std::size_t nobs);

/// Largest lag tried by adf_test: floor(12 (n/100)^(1/4)).
[[nodiscard]] int adf_max_lag(std::size_t n);

/// Augmented Dickey-Fuller test with a constant and no trend. The lag order
/// minimizes AIC over 0..max_lag on a common sample; the chosen model is
/// then refit on every usable observation. A negative max_lag uses
/// adf_max_lag. Critical values follow MacKinnon's response surface for the
/// sample size. Throws DiagnosticError for fewer than 20 observations.
[[nodiscard]] StationarityResult adf_test(std::span<const double> series, int max_lag = -1);

/// Bartlett bandwidth used by kpss_test: floor(4 (n/100)^(2/9)).
[[nodiscard]] int kpss_bandwidth(std::size_t n);

/// KPSS level-stationarity test with a Bartlett long-run variance. A negative
/// lags uses kpss_bandwidth. Throws DiagnosticError for fewer than 20 observations.
[[nodiscard]] StationarityResult kpss_test(std::span<const double> series, int lags = -1);

/// x[i+1] - x[i].
[[nodiscard]] std::vector<double> difference(std::span<const double> series);

void write_stationarity_csv(std::ostream& os, const std::vector<std::pair<std::string, StationarityResult>>& rows);

}  // namespace ggdrift::diag
