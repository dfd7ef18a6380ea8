#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>

#include "ggdrift/config.hpp"

namespace ggdrift::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNotConverged = 3;
inline constexpr int kExitInitFailure = 4;

/// Convergence bar for a successful fit.
inline constexpr double kRhatThreshold = 1.02;

/// Command-line values that take precedence over the config file.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<int> chains;
  std::optional<int> iter;
  std::optional<int> warmup;
  std::optional<int> start_age;
  std::optional<std::string> csv;
  std::optional<std::string> deaths;
  std::optional<std::string> exposures;
  std::optional<std::string> sex;
};

/// `simulate` takes the seed for the scenario; everything else for the sampler.
void apply_overrides(cfg::FitConfig& c, const Overrides& o, bool seed_is_scenario);

/// Dataset named by the config: HMD tables, a normalized CSV or a simulated scenario.
[[nodiscard]] CohortDataset load_dataset(const cfg::FitConfig& c, std::ostream& log);

[[nodiscard]] int cmd_simulate(const cfg::FitConfig& c, std::ostream& log);
[[nodiscard]] int cmd_fit(const cfg::FitConfig& c, std::ostream& log);
[[nodiscard]] int cmd_summarize(const cfg::FitConfig& c, const std::string& draws_path, std::ostream& log);
[[nodiscard]] int cmd_diagnose(const cfg::FitConfig& c, const std::string& draws_path, std::ostream& log);

/// Either a scalar sigma_rw or a draws file; writes mdd.json when out_dir is set.
[[nodiscard]] int cmd_mdd(std::optional<double> sigma, const std::string& draws_path, int n_cohorts,
                          const std::string& out_dir, std::ostream& log);

/// Runs `body`, mapping exceptions to the exit-code contract and printing
/// the message to `err`.
[[nodiscard]] int guarded(const std::function<int()>& body, std::ostream& err);

}  // namespace ggdrift::cli
