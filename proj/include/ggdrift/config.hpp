#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "ggdrift/hmd_io.hpp"
#include "ggdrift/kde.hpp"
#include "ggdrift/mcmc.hpp"
#include "ggdrift/posterior.hpp"
#include "ggdrift/ppc.hpp"
#include "ggdrift/simulate.hpp"

namespace ggdrift::cfg {

/// Where the deaths and exposures come from: a pair of HMD cohort tables or
/// one normalized CSV.
struct DataSource {
  std::string deaths;
  std::string exposures;
  std::string csv;
};

struct FitConfig {
  std::optional<DataSource> data;
  std::optional<sim::TruthScenario> scenario;
  io::Sex sex = io::Sex::Female;
  io::SelectionRule selection;
  mcmc::SamplerConfig sampler;
  posterior::PriorConfig priors;
  summary::KdeSettings kde;
  diag::QqSettings qq;
  double hpd_mass = 0.95;
  std::string output_dir = "out";
};

/// Parses a JSON config. Unknown keys and wrongly typed values raise
/// ConfigError with the dotted field path.
[[nodiscard]] FitConfig parse_config(const std::string& json_text);
[[nodiscard]] FitConfig load_config(const std::string& path);

/// Cross-field checks; `need_source` requires exactly one of data and
/// scenario. Throws ConfigError.
void validate(const FitConfig& cfg, bool need_source);

}  // namespace ggdrift::cfg
