#include "ggdrift/config.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "ggdrift/errors.hpp"

namespace ggdrift::cfg {

namespace {

using nlohmann::json;

std::string join(const std::string& prefix, const std::string& key) { return prefix.empty() ? key : prefix + "." + key; }

void only_keys(const json& j, const std::string& path, std::initializer_list<const char*> keys) {
  if (!j.is_object()) throw ConfigError(path.empty() ? "<root>" : path, "must be an object");
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k)) throw ConfigError(join(path, k), "unknown key");
}

void get(const json& j, const std::string& path, const char* key, double& out) {
  if (!j.contains(key)) return;
  if (!j[key].is_number()) throw ConfigError(join(path, key), "must be a number");
  out = j[key].get<double>();
}

void get(const json& j, const std::string& path, const char* key, int& out) {
  if (!j.contains(key)) return;
  if (!j[key].is_number_integer()) throw ConfigError(join(path, key), "must be an integer");
  out = j[key].get<int>();
}

void get(const json& j, const std::string& path, const char* key, std::uint64_t& out) {
  if (!j.contains(key)) return;
  if (!j[key].is_number_unsigned() && !(j[key].is_number_integer() && j[key].get<std::int64_t>() >= 0))
    throw ConfigError(join(path, key), "must be a non-negative integer");
  out = j[key].get<std::uint64_t>();
}

void get(const json& j, const std::string& path, const char* key, bool& out) {
  if (!j.contains(key)) return;
  if (!j[key].is_boolean()) throw ConfigError(join(path, key), "must be true or false");
  out = j[key].get<bool>();
}

void get(const json& j, const std::string& path, const char* key, std::string& out) {
  if (!j.contains(key)) return;
  if (!j[key].is_string()) throw ConfigError(join(path, key), "must be a string");
  out = j[key].get<std::string>();
}

void get(const json& j, const std::string& path, const char* key, std::vector<double>& out) {
  if (!j.contains(key)) return;
  const auto& a = j[key];
  if (!a.is_array()) throw ConfigError(join(path, key), "must be an array of numbers");
  out.clear();
  for (const auto& v : a) {
    if (!v.is_number()) throw ConfigError(join(path, key), "must be an array of numbers");
    out.push_back(v.get<double>());
  }
}

// Re-raises a module's own validation error as a config error; messages of
// the form "section.field ..." keep their field path.
template <class F>
void checked(const std::string& section, F&& f) {
  try {
    f();
  } catch (const ArgumentError& e) {
    const std::string msg = e.what();
    const auto sp = msg.find(' ');
    const std::string head = msg.substr(0, sp);
    if (head.find('.') != std::string::npos && sp != std::string::npos)
      throw ConfigError(head, msg.substr(sp + 1));
    throw ConfigError(section, msg);
  }
}

sim::TruthScenario read_scenario(const json& j) {
  const std::string p = "scenario";
  only_keys(j, p,
            {"n_cohorts", "n_ages", "start_age", "first_cohort", "b", "beta", "sigma_rw", "a_first", "a_last", "gamma",
             "gamma_per_cohort", "exposure_base", "exposure_decline", "exposures", "seed"});
  sim::TruthScenario s;
  get(j, p, "n_cohorts", s.n_cohorts);
  get(j, p, "n_ages", s.n_ages);
  get(j, p, "start_age", s.start_age);
  get(j, p, "first_cohort", s.first_cohort);
  get(j, p, "b", s.b);
  get(j, p, "beta", s.beta);
  get(j, p, "sigma_rw", s.sigma_rw);
  get(j, p, "a_first", s.a_first);
  get(j, p, "a_last", s.a_last);
  get(j, p, "gamma", s.gamma);
  get(j, p, "gamma_per_cohort", s.gamma_per_cohort);
  get(j, p, "exposure_base", s.exposure_base);
  get(j, p, "exposure_decline", s.exposure_decline);
  get(j, p, "exposures", s.exposures);
  get(j, p, "seed", s.seed);
  return s;
}

void read_sampler(const json& j, mcmc::SamplerConfig& s) {
  const std::string p = "sampler";
  only_keys(j, p,
            {"n_chains", "n_iter", "n_warmup", "seed", "target_accept", "block_target_accept", "adapt_gain",
             "adapt_decay", "block_adapt_start", "block_repeats", "covariance_restarts", "max_init_attempts",
             "init_jitter", "threads"});
  get(j, p, "n_chains", s.n_chains);
  get(j, p, "n_iter", s.n_iter);
  get(j, p, "n_warmup", s.n_warmup);
  get(j, p, "seed", s.seed);
  get(j, p, "target_accept", s.target_accept);
  get(j, p, "block_target_accept", s.block_target_accept);
  get(j, p, "adapt_gain", s.adapt_gain);
  get(j, p, "adapt_decay", s.adapt_decay);
  get(j, p, "block_adapt_start", s.block_adapt_start);
  get(j, p, "block_repeats", s.block_repeats);
  get(j, p, "covariance_restarts", s.covariance_restarts);
  get(j, p, "max_init_attempts", s.max_init_attempts);
  get(j, p, "init_jitter", s.init_jitter);
  get(j, p, "threads", s.threads);
}

void read_priors(const json& j, posterior::PriorConfig& pr) {
  const std::string p = "priors";
  only_keys(j, p,
            {"a_scale", "gamma_shape", "gamma_second", "gamma_second_is", "log_b_mean", "log_b_second", "beta_mean",
             "beta_second", "normal_second_is", "sigma_scale"});
  get(j, p, "a_scale", pr.a_scale);
  get(j, p, "gamma_shape", pr.gamma_shape);
  get(j, p, "gamma_second", pr.gamma_second);
  get(j, p, "log_b_mean", pr.log_b_mean);
  get(j, p, "log_b_second", pr.log_b_second);
  get(j, p, "beta_mean", pr.beta_mean);
  get(j, p, "beta_second", pr.beta_second);
  get(j, p, "sigma_scale", pr.sigma_scale);
  std::string g = pr.gamma_second_is_rate ? "rate" : "scale";
  get(j, p, "gamma_second_is", g);
  if (g != "rate" && g != "scale") throw ConfigError("priors.gamma_second_is", "must be 'rate' or 'scale'");
  pr.gamma_second_is_rate = g == "rate";
  std::string n = pr.normal_second_is_sd ? "sd" : "variance";
  get(j, p, "normal_second_is", n);
  if (n != "sd" && n != "variance") throw ConfigError("priors.normal_second_is", "must be 'sd' or 'variance'");
  pr.normal_second_is_sd = n == "sd";
}

}  // namespace

FitConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<root>", std::string("invalid JSON: ") + e.what());
  }
  only_keys(j, "", {"data", "scenario", "sex", "selection", "sampler", "priors", "kde", "qq", "hpd_mass", "output_dir"});
  FitConfig c;
  if (j.contains("data")) {
    const auto& d = j["data"];
    only_keys(d, "data", {"deaths", "exposures", "csv"});
    DataSource src;
    get(d, "data", "deaths", src.deaths);
    get(d, "data", "exposures", src.exposures);
    get(d, "data", "csv", src.csv);
    c.data = src;
  }
  if (j.contains("scenario")) c.scenario = read_scenario(j["scenario"]);
  if (j.contains("sex")) {
    std::string s;
    get(j, "", "sex", s);
    checked("sex", [&] { c.sex = io::parse_sex(s); });
  }
  if (j.contains("selection")) {
    const auto& s = j["selection"];
    only_keys(s, "selection", {"start_age", "min_age_groups", "override"});
    get(s, "selection", "start_age", c.selection.start_age);
    if (!s.contains("min_age_groups") && !s.value("override", false))
      checked("selection.start_age", [&] { c.selection = io::SelectionRule::sanctioned(c.selection.start_age); });
    get(s, "selection", "min_age_groups", c.selection.min_age_groups);
    get(s, "selection", "override", c.selection.overridden);
  }
  if (j.contains("sampler")) read_sampler(j["sampler"], c.sampler);
  if (j.contains("priors")) read_priors(j["priors"], c.priors);
  if (j.contains("kde")) {
    const auto& k = j["kde"];
    only_keys(k, "kde", {"grid_points", "bandwidth_adjust", "bins"});
    get(k, "kde", "grid_points", c.kde.grid_points);
    get(k, "kde", "bandwidth_adjust", c.kde.bandwidth_adjust);
    get(k, "kde", "bins", c.kde.bins);
  }
  if (j.contains("qq")) {
    const auto& q = j["qq"];
    only_keys(q, "qq", {"n_rep", "n_draws", "envelope", "center", "seed"});
    get(q, "qq", "n_rep", c.qq.n_rep);
    get(q, "qq", "n_draws", c.qq.n_draws);
    get(q, "qq", "envelope", c.qq.envelope);
    get(q, "qq", "seed", c.qq.seed);
    std::string center = "mean";
    get(q, "qq", "center", center);
    if (center != "mean" && center != "median") throw ConfigError("qq.center", "must be 'mean' or 'median'");
    c.qq.center = center == "mean" ? diag::QqCenter::Mean : diag::QqCenter::Median;
  }
  get(j, "", "hpd_mass", c.hpd_mass);
  get(j, "", "output_dir", c.output_dir);
  return c;
}

FitConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("--config", "cannot read " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str());
}

void validate(const FitConfig& c, bool need_source) {
  if (need_source && c.data.has_value() == c.scenario.has_value())
    throw ConfigError("data", "exactly one of 'data' and 'scenario' must be given");
  if (c.data) {
    const auto& d = *c.data;
    const bool hmd = !d.deaths.empty() || !d.exposures.empty();
    if (hmd == !d.csv.empty()) throw ConfigError("data", "give either deaths + exposures or csv");
    if (hmd && (d.deaths.empty() || d.exposures.empty()))
      throw ConfigError(d.deaths.empty() ? "data.deaths" : "data.exposures", "is required with HMD input");
    for (const auto& [field, path] : {std::pair{"data.deaths", d.deaths}, {"data.exposures", d.exposures}, {"data.csv", d.csv}})
      if (!path.empty() && !std::filesystem::exists(path)) throw ConfigError(field, "file not found: " + path);
  }
  if (c.scenario) checked("scenario", [&] { c.scenario->validate(); });
  checked("selection", [&] { c.selection.validate(); });
  checked("sampler", [&] { c.sampler.validate(); });
  checked("priors", [&] { c.priors.validate(); });
  checked("kde", [&] { c.kde.validate(); });
  checked("qq", [&] { c.qq.validate(); });
  if (!(c.hpd_mass > 0.0 && c.hpd_mass < 1.0)) throw ConfigError("hpd_mass", "must lie in (0, 1)");
  if (c.output_dir.empty()) throw ConfigError("output_dir", "must not be empty");
}

}  // namespace ggdrift::cfg
