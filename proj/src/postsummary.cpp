#include "ggdrift/postsummary.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "json.hpp"

#include "ggdrift/convergence.hpp"
#include "ggdrift/errors.hpp"

namespace ggdrift::summary {

namespace {

bool all_equal(std::span<const double> x) {
  return std::all_of(x.begin(), x.end(), [&](double v) { return v == x.front(); });
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::vector<double> flatten(const std::vector<std::vector<double>>& chains) {
  std::vector<double> out;
  for (const auto& c : chains) out.insert(out.end(), c.begin(), c.end());
  return out;
}

}  // namespace

Interval hpd_interval(std::span<const double> draws, double mass) {
  if (draws.size() < 20) throw SummaryError("hpd_interval needs at least 20 draws");
  if (!(mass > 0.0 && mass < 1.0)) throw ArgumentError("hpd mass must lie in (0, 1)");
  std::vector<double> s(draws.begin(), draws.end());
  std::sort(s.begin(), s.end());
  const std::size_t n = s.size();
  // Guard against mass * n landing a rounding error above an integer.
  auto m = static_cast<std::size_t>(std::ceil(mass * static_cast<double>(n) - 1e-9));
  m = std::clamp<std::size_t>(m, 1, n);
  std::size_t best = 0;
  double width = s[m - 1] - s[0];
  for (std::size_t i = 1; i + m <= n; ++i) {
    const double w = s[i + m - 1] - s[i];
    if (w < width) {
      width = w;
      best = i;
    }
  }
  return {s[best], s[best + m - 1]};
}

double posterior_mode(std::span<const double> draws, const KdeSettings& kde) {
  if (draws.size() < 100) throw SummaryError("posterior_mode needs at least 100 draws");
  if (all_equal(draws)) return draws.front();
  return Kde(draws, kde).argmax();
}

double p_direction(std::span<const double> draws) {
  if (draws.empty()) throw SummaryError("p_direction needs draws");
  std::vector<double> s(draws.begin(), draws.end());
  const std::size_t n = s.size();
  std::nth_element(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(n / 2), s.end());
  double median = s[n / 2];
  if (n % 2 == 0) median = 0.5 * (median + *std::max_element(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(n / 2)));
  std::size_t count = 0;
  if (median >= 0.0)
    count = static_cast<std::size_t>(std::count_if(draws.begin(), draws.end(), [](double v) { return v >= 0.0; }));
  else
    count = static_cast<std::size_t>(std::count_if(draws.begin(), draws.end(), [](double v) { return v <= 0.0; }));
  return static_cast<double>(count) / static_cast<double>(n);
}

double p_two_sided(double pd) {
  if (!(pd >= 0.5 && pd <= 1.0)) throw ArgumentError("P-direction must lie in [0.5, 1]");
  return 2.0 * (1.0 - pd);
}

double p_map(std::span<const double> draws, const KdeSettings& kde) {
  if (draws.size() < 100) throw SummaryError("p_map needs at least 100 draws");
  if (all_equal(draws)) return draws.front() == 0.0 ? 1.0 : 0.0;
  const Kde k(draws, kde);
  return std::clamp(k(0.0) / k.max_density(), 0.0, 1.0);
}

double mdd(double sigma_rw, int n_cohorts) {
  if (n_cohorts < 2) throw ArgumentError("MDD needs at least 2 cohorts");
  if (!(sigma_rw >= 0.0) || !std::isfinite(sigma_rw)) throw ArgumentError("sigma_rw must be finite and >= 0");
  return 1.96 * std::sqrt(2.0) * sigma_rw / std::sqrt(static_cast<double>(n_cohorts - 1));
}

double mdd_percent(double sigma_rw, int n_cohorts) { return 100.0 * std::expm1(mdd(sigma_rw, n_cohorts)); }

MddReport mdd_report(std::span<const double> sigma_draws, int n_cohorts, const KdeSettings& kde) {
  if (n_cohorts < 2) throw ArgumentError("MDD needs at least 2 cohorts");
  if (sigma_draws.empty()) throw ArgumentError("MDD needs sigma_rw draws");
  MddReport r;
  r.n_cohorts = n_cohorts;
  r.n_draws = sigma_draws.size();
  std::vector<double> pct;
  pct.reserve(sigma_draws.size());
  for (double s : sigma_draws) pct.push_back(mdd_percent(s, n_cohorts));
  if (sigma_draws.size() < 100) {
    // Too few draws for a density estimate; report the median draw.
    std::vector<double> s(sigma_draws.begin(), sigma_draws.end());
    std::sort(s.begin(), s.end());
    r.plug_in_percent = mdd_percent(s[s.size() / 2], n_cohorts);
    r.mode_percent = r.plug_in_percent;
    if (pct.size() >= 20) {
      r.hpd_percent = hpd_interval(pct);
    } else {
      const auto [lo, hi] = std::minmax_element(pct.begin(), pct.end());
      r.hpd_percent = {*lo, *hi};
    }
    return r;
  }
  r.plug_in_percent = mdd_percent(posterior_mode(sigma_draws, kde), n_cohorts);
  r.mode_percent = posterior_mode(pct, kde);
  r.hpd_percent = hpd_interval(pct);
  return r;
}

ParameterSummary summarize_parameter(const std::string& name, const std::vector<std::vector<double>>& chains,
                                     const KdeSettings& kde, double mass) {
  const auto pooled = flatten(chains);
  ParameterSummary s;
  s.name = name;
  s.mode = posterior_mode(pooled, kde);
  const auto hpd = hpd_interval(pooled, mass);
  s.hpd_low = hpd.low;
  s.hpd_high = hpd.high;
  s.p_direction = p_direction(pooled);
  s.p_two_sided = p_two_sided(s.p_direction);
  s.p_map = p_map(pooled, kde);
  s.rhat = mcmc::split_rhat(chains).value;
  s.ess = mcmc::effective_sample_size(chains).value;
  return s;
}

const ParameterSummary& SummaryReport::get(const std::string& name) const {
  for (const auto& p : parameters)
    if (p.name == name) return p;
  throw ArgumentError("no summary for '" + name + "'");
}

SummaryReport summarize(const mcmc::PosteriorDraws& draws, const KdeSettings& kde, double mass) {
  if (draws.n_chains() < 2 || draws.n_draws() < 4) throw SummaryError("summaries need >= 2 chains of >= 4 draws");
  SummaryReport r;
  auto b = draws.chains(draws.log_b_index());
  for (auto& c : b)
    for (double& v : c) v = std::exp(v);
  r.parameters.push_back(summarize_parameter("b", b, kde, mass));
  r.parameters.push_back(summarize_parameter("beta", draws.chains(draws.beta_index()), kde, mass));
  r.parameters.push_back(summarize_parameter("sigma_rw", draws.chains(draws.sigma_index()), kde, mass));
  r.mdd = mdd_report(draws.pooled(draws.sigma_index()), static_cast<int>(draws.n_cohorts()), kde);

  const auto names = draws.names();
  for (std::size_t i = 0; i < draws.n_params(); ++i) {
    const auto d = mcmc::split_rhat(draws.chains(i));
    if (!d.degenerate && d.value > r.max_rhat) {
      r.max_rhat = d.value;
      r.max_rhat_parameter = names[i];
    }
  }
  return r;
}

void write_summary_csv(std::ostream& os, const SummaryReport& report) {
  os << "Parameter,Estimate,Lower C.I.,Upper C.I.,P-direction,p,P-MAP,R-hat,ESS\n";
  for (const auto& p : report.parameters)
    os << p.name << ',' << fmt(p.mode) << ',' << fmt(p.hpd_low) << ',' << fmt(p.hpd_high) << ','
       << fmt(p.p_direction) << ',' << fmt(p.p_two_sided) << ',' << fmt(p.p_map) << ',' << fmt(p.rhat) << ','
       << fmt(p.ess) << '\n';
}

std::string summary_json(const SummaryReport& report) {
  nlohmann::ordered_json j;
  for (const auto& p : report.parameters) {
    j[p.name] = {{"estimate", p.mode},       {"lower", p.hpd_low},      {"upper", p.hpd_high},
                 {"p_direction", p.p_direction}, {"p", p.p_two_sided}, {"p_map", p.p_map},
                 {"rhat", p.rhat},           {"ess", p.ess}};
  }
  j["mdd_percent"] = {{"n_cohorts", report.mdd.n_cohorts},
                      {"plug_in", report.mdd.plug_in_percent},
                      {"estimate", report.mdd.mode_percent},
                      {"lower", report.mdd.hpd_percent.low},
                      {"upper", report.mdd.hpd_percent.high}};
  j["max_rhat"] = report.max_rhat;
  j["max_rhat_parameter"] = report.max_rhat_parameter;
  return j.dump(2);
}

void write_convergence_csv(std::ostream& os, const mcmc::PosteriorDraws& draws) {
  os << "parameter,rhat,ess,degenerate\n";
  const auto names = draws.names();
  for (std::size_t i = 0; i < draws.n_params(); ++i) {
    const auto ch = draws.chains(i);
    const auto r = mcmc::split_rhat(ch);
    const auto e = mcmc::effective_sample_size(ch);
    os << names[i] << ',' << fmt(r.value) << ',' << fmt(e.value) << ',' << (r.degenerate ? 1 : 0) << '\n';
  }
}

}  // namespace ggdrift::summary
