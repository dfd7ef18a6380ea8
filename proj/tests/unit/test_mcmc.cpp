#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "ggdrift/convergence.hpp"
#include "ggdrift/errors.hpp"
#include "ggdrift/mcmc.hpp"
#include "ggdrift/simulate.hpp"
#include "test_support.hpp"

using namespace ggdrift;
using namespace ggdrift::mcmc;

namespace {

SamplerConfig small_config(int iter, int warmup, std::uint64_t seed) {
  SamplerConfig c;
  c.n_iter = iter;
  c.n_warmup = warmup;
  c.seed = seed;
  return c;
}

CohortDataset small_dataset(std::uint64_t seed, int T = 8, int K = 15) {
  sim::TruthScenario sc;
  sc.n_cohorts = T;
  sc.n_ages = K;
  sc.seed = seed;
  return sim::generate_dataset(sc).data;
}

// Thinning that leaves roughly independent draws.
std::vector<double> independent(const std::vector<std::vector<double>>& chains) {
  const double ess = effective_sample_size(chains).value;
  std::size_t total = 0;
  for (const auto& c : chains) total += c.size();
  const auto k = static_cast<std::size_t>(std::ceil(static_cast<double>(total) / ess));
  std::vector<double> out;
  for (const auto& c : chains) {
    const auto t = testing::thin(c, std::max<std::size_t>(k, 1));
    out.insert(out.end(), t.begin(), t.end());
  }
  return out;
}

}  // namespace

TEST_CASE("split_rhat examples") {
  Random rng(1);
  std::vector<std::vector<double>> iid(4, std::vector<double>(1000));
  for (auto& c : iid)
    for (double& v : c) v = rng.normal();
  const auto r = split_rhat(iid);
  CHECK_FALSE(r.degenerate);
  CHECK(r.value >= 0.99);
  CHECK(r.value <= 1.01);

  std::vector<std::vector<double>> apart(2, std::vector<double>(1000));
  for (double& v : apart[0]) v = rng.normal();
  for (double& v : apart[1]) v = 3.0 + rng.normal();
  CHECK(split_rhat(apart).value > 1.2);

  const std::vector<std::vector<double>> flat(3, std::vector<double>(100, 2.5));
  const auto d = split_rhat(flat);
  CHECK(d.degenerate);
  CHECK(std::isnan(d.value));
}

TEST_CASE("split_rhat preconditions") {
  CHECK_THROWS_AS((void)split_rhat({std::vector<double>(100, 0.0)}), ArgumentError);
  CHECK_THROWS_AS((void)split_rhat({std::vector<double>(3, 0.0), std::vector<double>(3, 1.0)}), ArgumentError);
}

TEST_CASE("rank normalization ignores monotone transforms") {
  Random rng(4);
  std::vector<std::vector<double>> x(4, std::vector<double>(500));
  for (std::size_t c = 0; c < 4; ++c)
    for (double& v : x[c]) v = rng.normal() + 0.05 * static_cast<double>(c);
  auto ex = x;
  for (auto& c : ex)
    for (double& v : c) v = std::exp(v);
  CHECK(split_rhat(x).value == doctest::Approx(split_rhat(ex).value).epsilon(1e-12));
}

TEST_CASE("effective_sample_size examples") {
  Random rng(2);
  const std::size_t n = 20000;
  std::vector<double> iid(n);
  for (double& v : iid) v = rng.normal();
  const auto e = effective_sample_size(iid);
  CHECK(e.value > 0.85 * n);
  CHECK(e.value <= static_cast<double>(n));

  const auto ar = testing::ar1(n, 0.9, rng);
  const double want = n * (1.0 - 0.9) / (1.0 + 0.9);
  CHECK(std::abs(effective_sample_size(ar).value - want) < 0.25 * want);

  const std::vector<double> flat(100, 1.0);
  CHECK(effective_sample_size(flat).degenerate);
}

TEST_CASE("same seed gives bit-identical draws; thread count does not matter") {
  const auto d = small_dataset(3);
  auto cfg = small_config(600, 300, 77);
  cfg.threads = 1;
  const auto a = run_chains(d, cfg);
  cfg.threads = 4;
  const auto b = run_chains(d, cfg);
  bool same = true;
  for (std::size_t c = 0; c < a.n_chains(); ++c)
    for (std::size_t i = 0; i < a.n_draws(); ++i)
      for (std::size_t p = 0; p < a.n_params(); ++p) same = same && a.at(c, i, p) == b.at(c, i, p);
  CHECK(same);
  for (std::size_t c = 0; c < a.n_chains(); ++c) CHECK(a.stats[c].seed == b.stats[c].seed);

  cfg.seed = 78;
  const auto other = run_chains(d, cfg);
  CHECK(other.at(0, 0, 0) != a.at(0, 0, 0));
}

TEST_CASE("chains get distinct derived seeds") {
  const auto d = small_dataset(4);
  const auto draws = run_chains(d, small_config(200, 100, 5));
  for (std::size_t c = 0; c < draws.n_chains(); ++c) {
    CHECK(draws.stats[c].seed == derive_seed(5, c));
    for (std::size_t k = c + 1; k < draws.n_chains(); ++k) CHECK(draws.stats[c].seed != draws.stats[k].seed);
  }
}

TEST_CASE("adaptation is frozen after warm-up") {
  const auto d = small_dataset(5);
  const auto draws = run_chains(d, small_config(500, 300, 9));
  CHECK(draws.n_draws() == 200);
  CHECK(draws.total_draws() == 800);
  for (const auto& s : draws.stats) {
    CHECK(s.frozen_at == 300);
    CHECK(s.late_adaptation_updates == 0);
    CHECK(s.moves.count("a") == 1);
    CHECK(s.moves.at("a").proposed > 0);
  }
}

TEST_CASE("every stored draw satisfies the parameter invariants") {
  const auto d = small_dataset(6);
  const auto draws = run_chains(d, small_config(400, 200, 10));
  for (std::size_t c = 0; c < draws.n_chains(); ++c)
    for (std::size_t i = 0; i < draws.n_draws(); i += 7) CHECK_NOTHROW(draws.params(c, i).validate());
}

TEST_CASE("sampler configuration is validated") {
  const auto d = small_dataset(7);
  auto cfg = small_config(100, 100, 1);
  CHECK_THROWS_AS((void)run_chains(d, cfg), ArgumentError);
  cfg = small_config(100, 50, 1);
  cfg.n_chains = 1;
  CHECK_THROWS_AS((void)run_chains(d, cfg), ArgumentError);
}

TEST_CASE("initialization failure raises FitError") {
  const auto d = small_dataset(8);
  auto cfg = small_config(100, 50, 1);
  auto init = default_initial(d);
  init.a[0] = -1.0;  // outside the support whatever the jitter
  cfg.initial = init;
  cfg.max_init_attempts = 5;
  CHECK_THROWS_AS((void)run_chains(d, cfg), FitError);
}

TEST_CASE("conjugate gamma-Poisson toy through the generic kernel") {
  // y_i ~ Poisson(lambda), lambda ~ Gamma(2, rate 1); sampled on log lambda.
  const std::vector<int> y{3, 7, 4, 6, 5, 2, 8, 4};
  double sum = 0.0;
  for (int v : y) sum += v;
  const double shape = 2.0 + sum;
  const double rate = 1.0 + static_cast<double>(y.size());
  const auto target = [&](std::span<const double> x) {
    const double l = std::exp(x[0]);
    return (shape - 1.0) * x[0] - rate * l + x[0];  // log density of log lambda
  };
  const auto draws = run_generic(target, {0.0}, small_config(6000, 2000, 17));
  const auto pooled = draws.pooled(0);
  std::vector<double> lam;
  for (double v : pooled) lam.push_back(std::exp(v));
  std::vector<std::vector<double>> lam_chains = draws.chains(0);
  for (auto& c : lam_chains)
    for (double& v : c) v = std::exp(v);
  const double ess = effective_sample_size(lam_chains).value;
  const double mcse = testing::sd(lam) / std::sqrt(ess);
  CHECK(std::abs(testing::mean(lam) - shape / rate) < 3.0 * mcse);
}

TEST_CASE("single-rate Poisson toy through the model sampler") {
  // One cohort, one age; only a moves. gamma is negligible so lambda = a e^{b/2}.
  const CohortDataset d({80, 1}, {1900}, {37}, {400.0}, {1});
  auto cfg = small_config(8000, 2000, 23);
  cfg.update = {true, false, false, false};
  posterior::ModelParameters init;
  init.a = {0.08};
  init.gamma = {1e-9};
  init.walk = {std::log(0.1), 0.0, 0.05, {0.0}};
  cfg.initial = init;
  cfg.init_jitter = 0.0;
  const auto draws = run_chains(d, cfg);

  // Posterior of a: a^37 exp(-a c) * halfN(a; 1), c = 400 e^{0.05}; by quadrature.
  const double c = 400.0 * std::exp(0.1 * 0.5);
  double z = 0.0, m = 0.0;
  const double h = 1e-5;
  for (double a = h / 2; a < 0.5; a += h) {
    const double w = std::exp(37.0 * std::log(a) - a * c - 0.5 * a * a + 150.0);
    z += w;
    m += w * a;
  }
  const double want = m / z;
  const auto a_chains = draws.chains(draws.a_index(0));
  const auto pooled = draws.pooled(draws.a_index(0));
  const double mcse = testing::sd(pooled) / std::sqrt(effective_sample_size(a_chains).value);
  CHECK(std::abs(testing::mean(pooled) - want) < 3.0 * mcse);
  // The frozen coordinates never move.
  const auto g = draws.pooled(draws.gamma_index(0));
  CHECK(*std::min_element(g.begin(), g.end()) == *std::max_element(g.begin(), g.end()));
}

TEST_CASE("sampling the prior recovers the prior marginals") {
  const auto data = small_dataset(11, 3, 5).without_observations();
  const auto draws = run_chains(data, small_config(12000, 2000, 31));
  const double alpha = 0.01;

  const auto log_b = independent(draws.chains(draws.log_b_index()));
  const auto beta = independent(draws.chains(draws.beta_index()));
  const auto sigma = independent(draws.chains(draws.sigma_index()));
  const auto gamma = independent(draws.chains(draws.gamma_index(1)));
  const auto a = independent(draws.chains(draws.a_index(2)));

  const auto normal2 = [](double x) { return testing::normal_cdf(x / 2.0); };
  const auto half_normal = [](double x) { return x <= 0 ? 0.0 : 2.0 * testing::normal_cdf(x) - 1.0; };
  const auto exp_half = [](double x) { return x <= 0 ? 0.0 : -std::expm1(-0.5 * x); };

  CHECK(testing::ks_pvalue(testing::ks_statistic(log_b, normal2), static_cast<double>(log_b.size())) > alpha);
  CHECK(testing::ks_pvalue(testing::ks_statistic(beta, normal2), static_cast<double>(beta.size())) > alpha);
  CHECK(testing::ks_pvalue(testing::ks_statistic(sigma, half_normal), static_cast<double>(sigma.size())) > alpha);
  CHECK(testing::ks_pvalue(testing::ks_statistic(gamma, exp_half), static_cast<double>(gamma.size())) > alpha);
  CHECK(testing::ks_pvalue(testing::ks_statistic(a, half_normal), static_cast<double>(a.size())) > alpha);
}

TEST_CASE("two-parameter posterior matches grid quadrature") {
  // One cohort with modest exposure; (a, gamma) move, the slope is fixed.
  sim::TruthScenario sc;
  sc.n_cohorts = 2;
  sc.n_ages = 20;
  sc.exposure_base = 800.0;
  sc.gamma = 0.3;
  sc.sigma_rw = 0.0;
  sc.seed = 41;
  const auto data = sim::generate_dataset(sc).data.slice(0, 1);
  const double b = 0.105;

  auto cfg = small_config(10000, 3000, 43);
  cfg.update = {true, true, false, false};
  posterior::ModelParameters init;
  init.a = {0.06};
  init.gamma = {0.3};
  init.walk = {std::log(b), 0.0, 0.05, {0.0}};
  cfg.initial = init;
  const auto draws = run_chains(data, cfg);

  // Quadrature of the same log posterior over (log a, log gamma).
  const int n = 400;
  const double la0 = std::log(0.02), la1 = std::log(0.15);
  const double lg0 = std::log(0.01), lg1 = std::log(3.0);
  std::vector<double> la(n), lg(n), wa(n, 0.0), wg(n, 0.0);
  std::vector<double> logw(static_cast<std::size_t>(n * n));
  double top = -INFINITY;
  for (int i = 0; i < n; ++i) {
    la[i] = la0 + (la1 - la0) * (i + 0.5) / n;
    lg[i] = lg0 + (lg1 - lg0) * (i + 0.5) / n;
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      posterior::ModelParameters p = init;
      p.a[0] = std::exp(la[i]);
      p.gamma[0] = std::exp(lg[j]);
      const double v = log_target(p, data, {});
      logw[static_cast<std::size_t>(i * n + j)] = v;
      top = std::max(top, v);
    }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double w = std::exp(logw[static_cast<std::size_t>(i * n + j)] - top);
      wa[i] += w;
      wg[j] += w;
    }
  const auto cdf = [](std::vector<double> w) {
    double s = 0.0;
    for (double v : w) s += v;
    double run = 0.0;
    for (double& v : w) {
      run += v / s;
      v = run;
    }
    return w;
  };
  // Compare on the log scale, where the grid is uniform.
  std::vector<double> xa, xg;
  for (double v : draws.pooled(draws.a_index(0))) xa.push_back(std::log(v));
  for (double v : draws.pooled(draws.gamma_index(0))) xg.push_back(std::log(v));
  std::vector<std::vector<double>> ca = draws.chains(draws.a_index(0)), cg = draws.chains(draws.gamma_index(0));
  const double ess_a = effective_sample_size(ca).value;
  const double ess_g = effective_sample_size(cg).value;
  // W1 between an empirical law of ess points and its source is about 0.8 sd / sqrt(ess); allow 4x.
  CHECK(testing::wasserstein_to_grid(xa, la, cdf(wa)) < 4.0 * 0.8 * testing::sd(xa) / std::sqrt(ess_a));
  CHECK(testing::wasserstein_to_grid(xg, lg, cdf(wg)) < 4.0 * 0.8 * testing::sd(xg) / std::sqrt(ess_g));
}

TEST_CASE("posterior draws accessors") {
  PosteriorDraws d(2, 3, 2);
  CHECK(d.n_params() == 9);
  const auto names = d.names();
  CHECK(names.front() == "a[1]");
  CHECK(names[2] == "gamma[1]");
  CHECK(names[4] == "w[1]");
  CHECK(names.back() == "sigma_rw");
  CHECK(d.index_of("beta") == d.beta_index());
  CHECK_THROWS_AS((void)d.index_of("nope"), ArgumentError);
}
