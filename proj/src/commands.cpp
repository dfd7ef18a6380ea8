#include "ggdrift/commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "json.hpp"

#include "ggdrift/draws_io.hpp"
#include "ggdrift/errors.hpp"
#include "ggdrift/postsummary.hpp"
#include "ggdrift/stationarity.hpp"

namespace ggdrift::cli {

namespace fs = std::filesystem;

namespace {

fs::path prepare_out(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw ConfigError("output_dir", "cannot create " + dir);
  return fs::path(dir);
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream os(p);
  if (!os) throw ConfigError("output_dir", "cannot write " + p.string());
  return os;
}

std::string mdd_json(const summary::MddReport& m) {
  nlohmann::ordered_json j;
  j["n_cohorts"] = m.n_cohorts;
  j["n_draws"] = m.n_draws;
  j["plug_in_percent"] = m.plug_in_percent;
  j["estimate_percent"] = m.mode_percent;
  j["lower_percent"] = m.hpd_percent.low;
  j["upper_percent"] = m.hpd_percent.high;
  return j.dump(2);
}

void write_summaries(const mcmc::PosteriorDraws& draws, const cfg::FitConfig& c, const fs::path& out,
                     summary::SummaryReport& report) {
  report = summary::summarize(draws, c.kde, c.hpd_mass);
  {
    auto os = open_out(out / "summary.csv");
    summary::write_summary_csv(os, report);
  }
  open_out(out / "summary.json") << summary::summary_json(report) << '\n';
  {
    auto os = open_out(out / "convergence.csv");
    summary::write_convergence_csv(os, draws);
  }
  open_out(out / "mdd.json") << mdd_json(report.mdd) << '\n';
}

// Posterior mean of log b_t per cohort.
std::vector<double> mean_log_slopes(const mcmc::PosteriorDraws& draws) {
  std::vector<double> m(draws.n_cohorts(), 0.0);
  for (std::size_t c = 0; c < draws.n_chains(); ++c)
    for (std::size_t i = 0; i < draws.n_draws(); ++i) {
      const auto lb = draws.log_slopes(c, i);
      for (std::size_t t = 0; t < m.size(); ++t) m[t] += lb[t];
    }
  for (double& v : m) v /= static_cast<double>(draws.total_draws());
  return m;
}

}  // namespace

void apply_overrides(cfg::FitConfig& c, const Overrides& o, bool seed_is_scenario) {
  if (o.seed) {
    if (seed_is_scenario) {
      if (!c.scenario) c.scenario = sim::TruthScenario{};
      c.scenario->seed = *o.seed;
    } else {
      c.sampler.seed = *o.seed;
    }
  }
  if (o.out) c.output_dir = *o.out;
  if (o.chains) c.sampler.n_chains = *o.chains;
  if (o.iter) c.sampler.n_iter = *o.iter;
  if (o.warmup) c.sampler.n_warmup = *o.warmup;
  if (o.start_age) {
    try {
      c.selection = io::SelectionRule::sanctioned(*o.start_age);
    } catch (const ArgumentError& e) {
      throw ConfigError("--start-age", e.what());
    }
  }
  if (o.csv || o.deaths || o.exposures) {
    cfg::DataSource d;
    if (o.csv) d.csv = *o.csv;
    if (o.deaths) d.deaths = *o.deaths;
    if (o.exposures) d.exposures = *o.exposures;
    c.data = d;
    c.scenario.reset();
  }
  if (o.sex) {
    try {
      c.sex = io::parse_sex(*o.sex);
    } catch (const ArgumentError& e) {
      throw ConfigError("--sex", e.what());
    }
  }
}

CohortDataset load_dataset(const cfg::FitConfig& c, std::ostream& log) {
  if (c.scenario) {
    log << "simulating scenario (seed " << c.scenario->seed << ")\n";
    return sim::generate_dataset(*c.scenario).data;
  }
  if (!c.data) throw ConfigError("data", "no data source");
  if (!c.data->csv.empty()) return io::read_dataset_csv(c.data->csv);
  const auto deaths = io::read_hmd(c.data->deaths);
  const auto exposures = io::read_hmd(c.data->exposures);
  const auto built = io::build_dataset(deaths, exposures, c.sex, c.selection);
  log << "retained " << built.data.n_cohorts() << " cohorts " << built.data.cohorts().front() << "-"
      << built.data.cohorts().back() << ", excluded " << built.excluded_cohorts.size() << ", rounding delta "
      << built.rounding_delta << ", forced zeros " << built.forced_zeros << '\n';
  return built.data;
}

int cmd_simulate(const cfg::FitConfig& c, std::ostream& log) {
  const sim::TruthScenario scenario = c.scenario.value_or(sim::TruthScenario{});
  try {
    scenario.validate();
  } catch (const ArgumentError& e) {
    const std::string msg = e.what();
    throw ConfigError(msg.substr(0, msg.find(' ')), msg.substr(msg.find(' ') + 1));
  }
  const auto out = prepare_out(c.output_dir);
  const auto simd = sim::generate_dataset(scenario);
  io::write_dataset_csv((out / "dataset.csv").string(), simd.data);
  open_out(out / "truth.json") << sim::truth_json(scenario, simd) << '\n';
  log << "wrote " << simd.data.n_cohorts() * simd.data.n_ages() << " rows to " << (out / "dataset.csv").string()
      << '\n';
  return kExitOk;
}

int cmd_fit(const cfg::FitConfig& c, std::ostream& log) {
  cfg::validate(c, true);
  const auto out = prepare_out(c.output_dir);
  const auto data = load_dataset(c, log);
  if (c.scenario) {
    io::write_dataset_csv((out / "dataset.csv").string(), data);
    open_out(out / "truth.json") << sim::truth_json(*c.scenario, sim::generate_dataset(*c.scenario)) << '\n';
  }
  mcmc::PosteriorDraws draws;
  try {
    draws = mcmc::run_chains(data, c.sampler, c.priors);
  } catch (const FitError& e) {
    log << "initialization failed: " << e.what() << '\n';
    return kExitInitFailure;
  }
  io::write_draws_csv((out / "draws.csv").string(), draws);
  summary::SummaryReport report;
  write_summaries(draws, c, out, report);
  {
    auto qq = diag::posterior_predictive_qq(draws, data, c.qq);
    auto os = open_out(out / "qq.csv");
    diag::write_qq_csv(os, qq);
    log << "QQ envelope coverage " << qq.coverage() << '\n';
  }
  for (const auto& p : report.parameters)
    log << p.name << ": " << p.mode << " [" << p.hpd_low << ", " << p.hpd_high << "] P-direction " << p.p_direction
        << '\n';
  log << "max R-hat " << report.max_rhat << " (" << report.max_rhat_parameter << ")\n";
  if (!(report.max_rhat < kRhatThreshold)) {
    log << "not converged: max R-hat >= " << kRhatThreshold << '\n';
    return kExitNotConverged;
  }
  return kExitOk;
}

int cmd_summarize(const cfg::FitConfig& c, const std::string& draws_path, std::ostream& log) {
  cfg::validate(c, false);
  if (!fs::exists(draws_path)) throw ConfigError("--draws", "file not found: " + draws_path);
  const auto draws = io::read_draws_csv(draws_path);
  const auto out = prepare_out(c.output_dir);
  summary::SummaryReport report;
  write_summaries(draws, c, out, report);
  log << summary::summary_json(report) << '\n';
  return kExitOk;
}

int cmd_diagnose(const cfg::FitConfig& c, const std::string& draws_path, std::ostream& log) {
  cfg::validate(c, true);
  if (!fs::exists(draws_path)) throw ConfigError("--draws", "file not found: " + draws_path);
  const auto draws = io::read_draws_csv(draws_path);
  const auto data = load_dataset(c, log);
  const auto out = prepare_out(c.output_dir);

  const auto qq = diag::posterior_predictive_qq(draws, data, c.qq);
  {
    auto os = open_out(out / "qq.csv");
    diag::write_qq_csv(os, qq);
  }
  log << "QQ envelope coverage " << qq.coverage() << '\n';

  const auto level = mean_log_slopes(draws);
  const auto diff = diag::difference(level);
  std::vector<std::pair<std::string, diag::StationarityResult>> rows;
  if (diff.size() >= 20) {
    rows.emplace_back("log_b_t", diag::adf_test(level));
    rows.emplace_back("log_b_t", diag::kpss_test(level));
    rows.emplace_back("diff_log_b_t", diag::adf_test(diff));
    rows.emplace_back("diff_log_b_t", diag::kpss_test(diff));
  } else {
    log << "fewer than 21 cohorts; stationarity tests skipped\n";
  }
  auto os = open_out(out / "stationarity.csv");
  diag::write_stationarity_csv(os, rows);
  for (const auto& [label, r] : rows)
    log << label << ' ' << r.name() << ' ' << r.statistic << " p " << r.bracket << '\n';
  return kExitOk;
}

int cmd_mdd(std::optional<double> sigma, const std::string& draws_path, int n_cohorts, const std::string& out_dir,
            std::ostream& log) {
  if (sigma.has_value() == !draws_path.empty()) throw ConfigError("--sigma", "give exactly one of --sigma and --draws");
  if (n_cohorts < 2) throw ConfigError("--T", "must be >= 2");
  summary::MddReport report;
  if (sigma) {
    if (!(*sigma >= 0.0) || !std::isfinite(*sigma)) throw ConfigError("--sigma", "must be finite and >= 0");
    const double v = *sigma;
    report = summary::mdd_report(std::span<const double>(&v, 1), n_cohorts);
  } else {
    if (!fs::exists(draws_path)) throw ConfigError("--draws", "file not found: " + draws_path);
    const auto draws = io::read_draws_csv(draws_path);
    report = summary::mdd_report(draws.pooled(draws.sigma_index()), n_cohorts);
  }
  const auto text = mdd_json(report);
  if (!out_dir.empty()) open_out(prepare_out(out_dir) / "mdd.json") << text << '\n';
  log << text << '\n';
  return kExitOk;
}

int guarded(const std::function<int()>& body, std::ostream& err) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ParseError& e) {
    err << "input error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const SelectionError& e) {
    err << "selection error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ArgumentError& e) {
    err << "invalid argument: " << e.what() << '\n';
    return kExitConfig;
  } catch (const FitError& e) {
    err << "initialization failed: " << e.what() << '\n';
    return kExitInitFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
}

}  // namespace ggdrift::cli
