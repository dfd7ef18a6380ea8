#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ggdrift/kde.hpp"
#include "ggdrift/mcmc.hpp"

namespace ggdrift::summary {

struct Interval {
  double low = 0.0;
  double high = 0.0;
};

/// Shortest window of sorted draws holding ceil(mass * N) of them; the
/// lowest such window on ties. Needs >= 20 draws and 0 < mass < 1.
[[nodiscard]] Interval hpd_interval(std::span<const double> draws, double mass = 0.95);

/// Argmax of the kernel density estimate over the draw-range grid; the
/// common value when every draw is equal. Needs >= 100 draws.
[[nodiscard]] double posterior_mode(std::span<const double> draws, const KdeSettings& kde = {});

/// Share of draws on the median's side of zero, zeros included.
[[nodiscard]] double p_direction(std::span<const double> draws);

/// 2 (1 - pd); pd must lie in [0.5, 1].
[[nodiscard]] double p_two_sided(double pd);

/// KDE density at zero over the grid maximum, clipped to [0, 1].
[[nodiscard]] double p_map(std::span<const double> draws, const KdeSettings& kde = {});

/// Drift per cohort detectable at the two-sided 95% level:
/// 1.96 sqrt(2) sigma_rw / sqrt(T - 1).
[[nodiscard]] double mdd(double sigma_rw, int n_cohorts);
/// The same drift as a cohort-to-cohort percent change in b.
[[nodiscard]] double mdd_percent(double sigma_rw, int n_cohorts);

struct MddReport {
  int n_cohorts = 0;
  std::size_t n_draws = 0;
  /// Percent MDD at the sigma_rw mode.
  double plug_in_percent = 0.0;
  /// Mode and 95% HPD of the per-draw percent MDD.
  double mode_percent = 0.0;
  Interval hpd_percent;
};

/// Per-draw MDD summary. A single draw gives the plug-in value everywhere.
[[nodiscard]] MddReport mdd_report(std::span<const double> sigma_draws, int n_cohorts,
                                   const KdeSettings& kde = {});

struct ParameterSummary {
  std::string name;
  double mode = 0.0;
  double hpd_low = 0.0;
  double hpd_high = 0.0;
  double p_direction = 0.0;
  double p_two_sided = 0.0;
  double p_map = 0.0;
  double rhat = 0.0;
  double ess = 0.0;
};

/// Summary of one scalar quantity given per-chain draws.
[[nodiscard]] ParameterSummary summarize_parameter(const std::string& name,
                                                   const std::vector<std::vector<double>>& chains,
                                                   const KdeSettings& kde = {}, double mass = 0.95);

struct SummaryReport {
  /// b, beta and sigma_rw in that order.
  std::vector<ParameterSummary> parameters;
  MddReport mdd;
  /// Largest rank-normalized R-hat over every sampled column.
  double max_rhat = 0.0;
  std::string max_rhat_parameter;

  [[nodiscard]] const ParameterSummary& get(const std::string& name) const;
};

[[nodiscard]] SummaryReport summarize(const mcmc::PosteriorDraws& draws, const KdeSettings& kde = {},
                                      double mass = 0.95);

/// Columns Parameter, Estimate, Lower C.I., Upper C.I., P-direction, p, P-MAP, R-hat, ESS.
void write_summary_csv(std::ostream& os, const SummaryReport& report);
[[nodiscard]] std::string summary_json(const SummaryReport& report);

/// R-hat and ESS of every draws column.
void write_convergence_csv(std::ostream& os, const mcmc::PosteriorDraws& draws);

}  // namespace ggdrift::summary
