#include "ggdrift/ppc.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "ggdrift/errors.hpp"
#include "ggdrift/gg_model.hpp"
#include "ggdrift/rng.hpp"

namespace ggdrift::diag {

namespace {

double sorted_quantile(const std::vector<double>& s, double p) {
  const double pos = p * static_cast<double>(s.size() - 1);
  const auto i = static_cast<std::size_t>(std::floor(pos));
  if (i + 1 >= s.size()) return s.back();
  return s[i] + (pos - static_cast<double>(i)) * (s[i + 1] - s[i]);
}

}  // namespace

void QqSettings::validate() const {
  if (n_rep < 100) throw ArgumentError("qq.n_rep must be >= 100");
  if (n_draws < 1) throw ArgumentError("qq.n_draws must be >= 1");
  if (!(envelope > 0.0 && envelope < 1.0)) throw ArgumentError("qq.envelope must lie in (0, 1)");
}

double QqSeries::coverage() const {
  if (levels.empty()) return 0.0;
  std::size_t inside = 0;
  for (std::size_t k = 0; k < levels.size(); ++k)
    if (observed[k] >= lower[k] && observed[k] <= upper[k]) ++inside;
  return static_cast<double>(inside) / static_cast<double>(levels.size());
}

QqSeries posterior_predictive_qq(const mcmc::PosteriorDraws& draws, const CohortDataset& data,
                                 const QqSettings& settings) {
  settings.validate();
  if (data.empty() || data.observed_cells() == 0) throw ArgumentError("posterior_predictive_qq needs observed cells");
  if (draws.total_draws() == 0) throw ArgumentError("posterior_predictive_qq needs draws");
  if (draws.n_cohorts() != data.n_cohorts()) throw ArgumentError("draws and data disagree on the cohort count");

  const std::size_t T = data.n_cohorts();
  const std::size_t K = data.n_ages();
  std::vector<std::size_t> cells;
  std::vector<double> observed;
  for (std::size_t t = 0; t < T; ++t) {
    const auto m = data.mask(t);
    const auto d = data.deaths(t);
    for (std::size_t k = 0; k < K; ++k)
      if (m[k]) {
        cells.push_back(t * K + k);
        observed.push_back(static_cast<double>(d[k]));
      }
  }
  std::sort(observed.begin(), observed.end());
  const std::size_t n = observed.size();

  // Evenly spaced posterior draws; (chain, draw) pairs over the pooled order.
  const std::size_t total = draws.total_draws();
  const std::size_t n_sel = std::min<std::size_t>(static_cast<std::size_t>(settings.n_draws), total);
  std::vector<std::vector<double>> means(n_sel);
  for (std::size_t j = 0; j < n_sel; ++j) {
    const std::size_t flat = j * total / n_sel;
    const std::size_t c = flat / draws.n_draws();
    const std::size_t i = flat % draws.n_draws();
    const auto p = draws.params(c, i);
    const auto lb = draws.log_slopes(c, i);
    const auto exposures = data.all_exposures();
    auto& mu = means[j];
    mu.resize(n);
    for (std::size_t q = 0; q < n; ++q) {
      const std::size_t t = cells[q] / K;
      const std::size_t k = cells[q] % K;
      const model::GompertzCohortParams gp{p.a[t], std::exp(lb[t]), p.gamma[t]};
      mu[q] = model::cohort_hazard(gp, model::AgeGrid::midpoint(static_cast<int>(k))) * exposures[cells[q]];
    }
  }

  const auto R = static_cast<std::size_t>(settings.n_rep);
  std::vector<double> reps(R * n);  // [rep][sorted position]
  Random rng(settings.seed);
  for (std::size_t r = 0; r < R; ++r) {
    const auto& mu = means[r % n_sel];
    double* row = reps.data() + r * n;
    for (std::size_t q = 0; q < n; ++q) row[q] = static_cast<double>(rng.poisson(mu[q]));
    std::sort(row, row + n);
  }

  QqSeries out;
  out.label = data.country.empty() && data.sex.empty() ? "data" : data.country + (data.sex.empty() ? "" : "_" + data.sex);
  out.levels.resize(n);
  out.observed = observed;
  out.predicted.resize(n);
  out.lower.resize(n);
  out.upper.resize(n);
  const double tail = 0.5 * (1.0 - settings.envelope);
  std::vector<double> col(R);
  for (std::size_t q = 0; q < n; ++q) {
    out.levels[q] = (static_cast<double>(q) + 0.5) / static_cast<double>(n);
    for (std::size_t r = 0; r < R; ++r) col[r] = reps[r * n + q];
    std::sort(col.begin(), col.end());
    if (settings.center == QqCenter::Mean) {
      double s = 0.0;
      for (double v : col) s += v;
      out.predicted[q] = s / static_cast<double>(R);
    } else {
      out.predicted[q] = sorted_quantile(col, 0.5);
    }
    out.lower[q] = sorted_quantile(col, tail);
    out.upper[q] = sorted_quantile(col, 1.0 - tail);
  }
  return out;
}

void write_qq_csv(std::ostream& os, const QqSeries& qq) {
  os << "label,level,observed,predicted,lower,upper\n";
  for (std::size_t q = 0; q < qq.size(); ++q)
    os << qq.label << ',' << qq.levels[q] << ',' << qq.observed[q] << ',' << qq.predicted[q] << ','
       << qq.lower[q] << ',' << qq.upper[q] << '\n';
}

}  // namespace ggdrift::diag
