#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "ggdrift/commands.hpp"
#include "ggdrift/errors.hpp"

using namespace ggdrift;

namespace {

struct Shared {
  std::string config;
  cli::Overrides o;
};

void add_shared(CLI::App* app, Shared& s) {
  app->add_option("--config", s.config, "JSON config file");
  app->add_option("--seed", s.o.seed, "Random seed");
  app->add_option("--out", s.o.out, "Output directory");
}

void add_sampler(CLI::App* app, Shared& s) {
  app->add_option("--chains", s.o.chains, "Number of chains");
  app->add_option("--iter", s.o.iter, "Iterations per chain, warm-up included");
  app->add_option("--warmup", s.o.warmup, "Warm-up iterations per chain");
}

void add_data(CLI::App* app, Shared& s) {
  app->add_option("--start-age", s.o.start_age, "Starting age of the selection rule (50, 60, 70 or 80)");
  app->add_option("--data", s.o.csv, "Normalized dataset CSV");
  app->add_option("--deaths", s.o.deaths, "HMD cohort deaths table");
  app->add_option("--exposures", s.o.exposures, "HMD cohort exposures table");
  app->add_option("--sex", s.o.sex, "female or male");
}

cfg::FitConfig resolve(const Shared& s, bool seed_is_scenario) {
  cfg::FitConfig c = s.config.empty() ? cfg::FitConfig{} : cfg::load_config(s.config);
  cli::apply_overrides(c, s.o, seed_is_scenario);
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gompertz slope estimation from cohort mortality"};
  app.require_subcommand(1);

  Shared sim_s, fit_s, sum_s, diag_s;
  auto* simulate = app.add_subcommand("simulate", "Write a synthetic dataset and its truth");
  add_shared(simulate, sim_s);

  auto* fit = app.add_subcommand("fit", "Sample the posterior and write draws, summaries and diagnostics");
  add_shared(fit, fit_s);
  add_sampler(fit, fit_s);
  add_data(fit, fit_s);

  std::string sum_draws;
  auto* summarize = app.add_subcommand("summarize", "Summaries from an existing draws file");
  add_shared(summarize, sum_s);
  summarize->add_option("--draws", sum_draws, "Draws CSV")->required();

  std::string diag_draws;
  auto* diagnose = app.add_subcommand("diagnose", "QQ check and stationarity tests for a fit");
  add_shared(diagnose, diag_s);
  add_data(diagnose, diag_s);
  diagnose->add_option("--draws", diag_draws, "Draws CSV")->required();

  std::optional<double> sigma;
  std::string mdd_draws;
  std::string mdd_out;
  int n_cohorts = 0;
  auto* mdd = app.add_subcommand("mdd", "Minimum detectable drift");
  mdd->add_option("--sigma", sigma, "sigma_rw value");
  mdd->add_option("--draws", mdd_draws, "Draws CSV; uses its sigma_rw column");
  mdd->add_option("--T", n_cohorts, "Number of cohorts")->required();
  mdd->add_option("--out", mdd_out, "Directory for mdd.json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kExitConfig;
  }

  return cli::guarded(
      [&]() -> int {
        if (simulate->parsed()) return cli::cmd_simulate(resolve(sim_s, true), std::cout);
        if (fit->parsed()) return cli::cmd_fit(resolve(fit_s, false), std::cout);
        if (summarize->parsed()) return cli::cmd_summarize(resolve(sum_s, false), sum_draws, std::cout);
        if (diagnose->parsed()) return cli::cmd_diagnose(resolve(diag_s, false), diag_draws, std::cout);
        return cli::cmd_mdd(sigma, mdd_draws, n_cohorts, mdd_out, std::cout);
      },
      std::cerr);
}
