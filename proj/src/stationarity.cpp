#include "ggdrift/stationarity.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <ostream>

#include <Eigen/Dense>

#include "ggdrift/errors.hpp"

namespace ggdrift::diag {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Knot {
  double stat;
  double p;
};

std::string bracket_of(double p) {
  if (p <= 0.01) return "<=0.01";
  if (p <= 0.05) return "0.01-0.05";
  if (p < 0.10) return "0.05-0.10";
  return ">=0.10";
}

// Piecewise-linear interpolation of p in the statistic; knots are sorted by
// statistic. Outside the table the edge level is kept.
double interpolate(const std::vector<Knot>& knots, double stat) {
  if (stat <= knots.front().stat) return knots.front().p;
  if (stat >= knots.back().stat) return knots.back().p;
  for (std::size_t i = 1; i < knots.size(); ++i) {
    if (stat <= knots[i].stat) {
      const double f = (stat - knots[i - 1].stat) / (knots[i].stat - knots[i - 1].stat);
      return knots[i - 1].p + f * (knots[i].p - knots[i - 1].p);
    }
  }
  return knots.back().p;
}

bool constant(std::span<const double> x) {
  return std::all_of(x.begin(), x.end(), [&](double v) { return v == x.front(); });
}

void check_series(std::span<const double> series, const char* name) {
  if (series.size() < 20) throw DiagnosticError(std::string(name) + " needs at least 20 observations");
  for (double v : series)
    if (!std::isfinite(v)) throw DiagnosticError(std::string(name) + " input must be finite");
}

StationarityResult degenerate_result(StationarityTest test, double statistic, std::size_t n) {
  StationarityResult r;
  r.test = test;
  r.statistic = statistic;
  r.p_value = 0.999;
  r.bracket = bracket_of(r.p_value);
  r.reject_5pct = false;
  r.n_obs = n;
  r.degenerate = true;
  return r;
}

struct AdfFit {
  double ssr = 0.0;
  double tstat = 0.0;
  std::size_t nobs = 0;
  bool exact = false;
};

// Regresses dy_t on [1, y_{t-1}, dy_{t-1..t-lag}] for t = first..n-1 of dy.
AdfFit adf_regression(std::span<const double> y, const std::vector<double>& dy, int lag, std::size_t first) {
  const std::size_t nobs = dy.size() - first;
  const auto k = static_cast<Eigen::Index>(2 + lag);
  Eigen::MatrixXd X(static_cast<Eigen::Index>(nobs), k);
  Eigen::VectorXd z(static_cast<Eigen::Index>(nobs));
  for (std::size_t r = 0; r < nobs; ++r) {
    const std::size_t t = first + r;  // index into dy; dy[t] = y[t+1] - y[t]
    const auto i = static_cast<Eigen::Index>(r);
    z(i) = dy[t];
    X(i, 0) = 1.0;
    X(i, 1) = y[t];
    for (int j = 1; j <= lag; ++j) X(i, 1 + j) = dy[t - static_cast<std::size_t>(j)];
  }
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  AdfFit fit;
  fit.nobs = nobs;
  if (qr.rank() < k) {
    fit.exact = true;
    return fit;
  }
  const Eigen::VectorXd coef = qr.solve(z);
  const Eigen::VectorXd resid = z - X * coef;
  fit.ssr = resid.squaredNorm();
  const double tss = (z.array() - z.mean()).square().sum();
  if (fit.ssr <= 1e-24 * std::max(tss, 1.0)) {
    fit.exact = true;
    return fit;
  }
  const double s2 = fit.ssr / static_cast<double>(static_cast<Eigen::Index>(nobs) - k);
  const Eigen::MatrixXd xtx_inv = (X.transpose() * X).inverse();
  fit.tstat = coef(1) / std::sqrt(s2 * xtx_inv(1, 1));
  return fit;
}

}  // namespace

// MacKinnon (2010) response surface, constant only, one variable.
double adf_critical_value(double level, std::size_t nobs) {
  if (level != 0.01 && level != 0.05 && level != 0.10) throw ArgumentError("ADF critical level must be 0.01, 0.05 or 0.10");
  const double n = static_cast<double>(nobs);
  static constexpr std::array<std::array<double, 4>, 3> coef{{
      {-3.43035, -6.5393, -16.786, -79.433},
      {-2.86154, -2.8903, -4.234, -40.040},
      {-2.56677, -1.5384, -2.809, 0.0},
  }};
  const std::size_t row = level == 0.01 ? 0 : level == 0.05 ? 1 : 2;
  const auto& c = coef[row];
  return c[0] + c[1] / n + c[2] / (n * n) + c[3] / (n * n * n);
}

std::vector<double> difference(std::span<const double> series) {
  std::vector<double> out;
  if (series.size() < 2) return out;
  out.reserve(series.size() - 1);
  for (std::size_t i = 1; i < series.size(); ++i) out.push_back(series[i] - series[i - 1]);
  return out;
}

int adf_max_lag(std::size_t n) {
  return static_cast<int>(std::floor(12.0 * std::pow(static_cast<double>(n) / 100.0, 0.25)));
}

StationarityResult adf_test(std::span<const double> series, int max_lag) {
  check_series(series, "ADF");
  const std::size_t n = series.size();
  if (constant(series)) return degenerate_result(StationarityTest::Adf, kNaN, n);
  if (max_lag < 0) max_lag = adf_max_lag(n);
  // Leave enough rows for the largest regression.
  max_lag = std::min<int>(max_lag, static_cast<int>(n) / 2 - 3);
  max_lag = std::max(max_lag, 0);
  const auto dy = difference(series);

  int best = 0;
  double best_aic = std::numeric_limits<double>::infinity();
  for (int p = 0; p <= max_lag; ++p) {
    const auto fit = adf_regression(series, dy, p, static_cast<std::size_t>(max_lag));
    if (fit.exact) continue;
    const double aic = static_cast<double>(fit.nobs) * std::log(fit.ssr / static_cast<double>(fit.nobs)) + 2.0 * (p + 2);
    if (aic < best_aic) {
      best_aic = aic;
      best = p;
    }
  }
  const auto fit = adf_regression(series, dy, best, static_cast<std::size_t>(best));
  if (fit.exact) return degenerate_result(StationarityTest::Adf, kNaN, n);

  // Lower tail from the finite-sample surface; upper levels are asymptotic.
  const std::vector<Knot> knots{{adf_critical_value(0.01, fit.nobs), 0.01}, {-3.12, 0.025},
                                {adf_critical_value(0.05, fit.nobs), 0.05}, {adf_critical_value(0.10, fit.nobs), 0.10},
                                {-0.44, 0.90},                 {-0.07, 0.95},
                                {0.23, 0.975},                 {0.60, 0.99}};
  StationarityResult r;
  r.test = StationarityTest::Adf;
  r.statistic = fit.tstat;
  r.p_value = std::clamp(interpolate(knots, fit.tstat), 0.001, 0.999);
  r.bracket = bracket_of(r.p_value);
  r.reject_5pct = fit.tstat < adf_critical_value(0.05, fit.nobs);
  r.lags = best;
  r.n_obs = fit.nobs;
  return r;
}

int kpss_bandwidth(std::size_t n) {
  return static_cast<int>(std::floor(4.0 * std::pow(static_cast<double>(n) / 100.0, 2.0 / 9.0)));
}

StationarityResult kpss_test(std::span<const double> series, int lags) {
  check_series(series, "KPSS");
  const std::size_t n = series.size();
  if (constant(series)) {
    auto r = degenerate_result(StationarityTest::Kpss, 0.0, n);
    r.lags = lags < 0 ? kpss_bandwidth(n) : lags;
    return r;
  }
  if (lags < 0) lags = kpss_bandwidth(n);
  lags = std::min<int>(lags, static_cast<int>(n) - 1);

  double mean = 0.0;
  for (double v : series) mean += v;
  mean /= static_cast<double>(n);
  std::vector<double> e(n);
  for (std::size_t i = 0; i < n; ++i) e[i] = series[i] - mean;

  double eta = 0.0;
  double s = 0.0;
  for (double v : e) {
    s += v;
    eta += s * s;
  }
  const double nd = static_cast<double>(n);
  double lrv = 0.0;
  for (double v : e) lrv += v * v;
  for (int l = 1; l <= lags; ++l) {
    double g = 0.0;
    for (std::size_t t = static_cast<std::size_t>(l); t < n; ++t) g += e[t] * e[t - static_cast<std::size_t>(l)];
    lrv += 2.0 * (1.0 - l / (lags + 1.0)) * g;
  }
  lrv /= nd;
  if (!(lrv > 0.0)) return degenerate_result(StationarityTest::Kpss, 0.0, n);

  const double stat = eta / (nd * nd * lrv);
  const std::vector<Knot> knots{{0.347, 0.10}, {0.463, 0.05}, {0.574, 0.025}, {0.739, 0.01}};
  StationarityResult r;
  r.test = StationarityTest::Kpss;
  r.statistic = stat;
  // Larger statistics mean smaller p; interpolate on the table as given.
  if (stat <= knots.front().stat) {
    r.p_value = 0.10;
  } else if (stat >= knots.back().stat) {
    r.p_value = 0.01;
  } else {
    for (std::size_t i = 1; i < knots.size(); ++i)
      if (stat <= knots[i].stat) {
        const double f = (stat - knots[i - 1].stat) / (knots[i].stat - knots[i - 1].stat);
        r.p_value = knots[i - 1].p + f * (knots[i].p - knots[i - 1].p);
        break;
      }
  }
  r.bracket = bracket_of(r.p_value);
  r.reject_5pct = stat > 0.463;
  r.lags = lags;
  r.n_obs = n;
  return r;
}

void write_stationarity_csv(std::ostream& os, const std::vector<std::pair<std::string, StationarityResult>>& rows) {
  os << "series,test,statistic,p_value,bracket,reject_5pct,lags,n_obs,degenerate\n";
  for (const auto& [label, r] : rows)
    os << label << ',' << r.name() << ',' << r.statistic << ',' << r.p_value << ',' << r.bracket << ','
       << (r.reject_5pct ? 1 : 0) << ',' << r.lags << ',' << r.n_obs << ',' << (r.degenerate ? 1 : 0) << '\n';
}

}  // namespace ggdrift::diag
