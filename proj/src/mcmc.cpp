#include "ggdrift/mcmc.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <thread>

#include "ggdrift/errors.hpp"

namespace ggdrift::mcmc {

using posterior::kNegInf;
using posterior::LikelihoodCache;
using posterior::ModelParameters;
using posterior::PriorConfig;

namespace {

bool accept(Random& rng, double log_ratio) {
  if (std::isnan(log_ratio)) return false;
  if (log_ratio >= 0.0) return true;
  return rng.log_uniform() < log_ratio;
}

void run_workers(int n_chains, int threads, const std::function<void(int)>& body) {
  int workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, n_chains);
  if (workers == 1) {
    for (int c = 0; c < n_chains; ++c) body(c);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n_chains));
  std::vector<std::jthread> pool;
  for (int i = 0; i < workers; ++i) {
    pool.emplace_back([&] {
      for (int c = next++; c < n_chains; c = next++) {
        try {
          body(c);
        } catch (...) {
          errors[static_cast<std::size_t>(c)] = std::current_exception();
        }
      }
    });
  }
  pool.clear();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

// Log target split into per-cohort, innovation and hyperparameter terms so
// that each move touches only what it changes.
class ChainState {
 public:
  ChainState(const LikelihoodCache& lik, const PriorConfig& priors, const ModelParameters& p)
      : lik_(lik), priors_(priors), gamma_rate_(priors.gamma_rate()) {
    const std::size_t n = p.n_cohorts();
    la.resize(n);
    lg.resize(n);
    for (std::size_t t = 0; t < n; ++t) {
      la[t] = std::log(p.a[t]);
      lg[t] = std::log(p.gamma[t]);
    }
    w = p.walk.w;
    log_b = p.walk.log_b;
    beta = p.walk.beta;
    ls = std::log(p.walk.sigma_rw);
    rebuild_slopes();
    cterm.resize(n);
    for (std::size_t t = 0; t < n; ++t) cterm[t] = cohort_value(t, la[t], lg[t], lbt[t]);
    walk_term = walk_value(w, ls);
    hyper_term = hyper_value(log_b, beta, ls);
  }

  [[nodiscard]] std::size_t size() const noexcept { return la.size(); }

  [[nodiscard]] double cohort_value(std::size_t t, double log_a, double log_g, double log_bt) const {
    const double a = std::exp(log_a);
    const double g = std::exp(log_g);
    const double ll = lik_.cohort(t, a, std::exp(log_bt), g);
    if (ll == kNegInf) return kNegInf;
    return ll + posterior::half_normal_logpdf(a, priors_.a_scale) + log_a +
           posterior::gamma_logpdf(g, priors_.gamma_shape, gamma_rate_) + log_g;
  }

  /// Innovation log density without the -T log(2 sigma) constant.
  [[nodiscard]] static double laplace_kernel(double v, double inv_sigma) noexcept {
    return -std::abs(v) * inv_sigma;
  }

  [[nodiscard]] static double walk_value(std::span<const double> innov, double log_sigma) {
    const double inv_sigma = std::exp(-log_sigma);
    double s = 0.0;
    for (double v : innov) s += laplace_kernel(v, inv_sigma);
    return s - static_cast<double>(innov.size()) * (std::log(2.0) + log_sigma);
  }

  [[nodiscard]] double hyper_value(double lb, double dr, double log_sigma) const {
    return posterior::normal_logpdf(lb, priors_.log_b_mean, priors_.log_b_sd()) +
           posterior::normal_logpdf(dr, priors_.beta_mean, priors_.beta_sd()) +
           posterior::half_normal_logpdf(std::exp(log_sigma), priors_.sigma_scale) + log_sigma;
  }

  void rebuild_slopes() {
    lbt.resize(w.size());
    double x = 0.0;
    for (std::size_t t = 0; t < w.size(); ++t) {
      x += beta + w[t];
      lbt[t] = log_b + x;
    }
  }

  [[nodiscard]] double total() const {
    return std::accumulate(cterm.begin(), cterm.end(), 0.0) + walk_term + hyper_term;
  }

  void store(std::span<double> row) const {
    const std::size_t n = size();
    for (std::size_t t = 0; t < n; ++t) {
      row[t] = std::exp(la[t]);
      row[n + t] = std::exp(lg[t]);
      row[2 * n + t] = w[t];
    }
    row[3 * n] = log_b;
    row[3 * n + 1] = beta;
    row[3 * n + 2] = std::exp(ls);
  }

  std::vector<double> la, lg, w, lbt, cterm;
  double log_b = 0.0, beta = 0.0, ls = 0.0;
  double walk_term = 0.0, hyper_term = 0.0;

 private:
  const LikelihoodCache& lik_;
  const PriorConfig& priors_;
  double gamma_rate_;
};

class ModelChain {
 public:
  ModelChain(const LikelihoodCache& lik, const PriorConfig& priors, const SamplerConfig& cfg,
             const ModelParameters& start, std::uint64_t seed)
      : cfg_(cfg), rng_(seed), s_(lik, priors, start) {
    const std::size_t n = s_.size();
    const double g = cfg.adapt_gain, d = cfg.adapt_decay, tgt = cfg.target_accept;
    sa_.assign(n, ScaleAdapter(0.05, tgt, g, d));
    sg_.assign(n, ScaleAdapter(0.3, tgt, g, d));
    sl_.assign(n, ScaleAdapter(0.02, tgt, g, d));
    block_dims_.clear();
    if (cfg.update.a) block_dims_.push_back(0);
    if (cfg.update.gamma) block_dims_.push_back(1);
    if (cfg.update.walk) block_dims_.push_back(2);
    const std::vector<double> init_sd{0.05, 0.3, 0.02};
    std::vector<double> sd;
    for (int k : block_dims_) sd.push_back(init_sd[static_cast<std::size_t>(k)]);
    if (block_dims_.size() >= 2)
      cb_.assign(n, CovarianceAdapter(sd, cfg.block_target_accept, g, d));
    s_log_b_ = ScaleAdapter(0.05, tgt, g, d);
    s_beta_ = ScaleAdapter(0.005, tgt, g, d);
    s_sigma_ = ScaleAdapter(0.2, tgt, g, d);
    s_rescale_ = ScaleAdapter(0.05, tgt, g, d);
    hyper_block_ = CovarianceAdapter({0.05, 0.005}, cfg.block_target_accept, g, d);
  }

  void run(PosteriorDraws& out, std::size_t chain, ChainStats& stats) {
    const bool walk_on = cfg_.update.walk && s_.size() > 0;
    std::vector<double> obs(3);
    std::vector<int> restarts;
    for (double f : cfg_.covariance_restarts) restarts.push_back(static_cast<int>(f * cfg_.n_warmup));
    bool blocks_ready = false;
    for (int it = 0; it < cfg_.n_iter; ++it) {
      adapting_ = it < cfg_.n_warmup;
      if (std::find(restarts.begin(), restarts.end(), it) != restarts.end()) {
        for (auto& c : cb_) c.reset();
        hyper_block_.reset();
      }
      if (it == cfg_.n_warmup) {
        freeze_all();
        stats.frozen_at = it;
      }
      recording_ = !adapting_;
      for (std::size_t t = 0; t < s_.size(); ++t) {
        if (cfg_.update.a) move_log_a(t);
        if (cfg_.update.gamma) move_log_gamma(t);
        if (walk_on) move_level(t);
        if (blocks_ready)
          for (int r = 0; r < cfg_.block_repeats; ++r) move_cohort_block(t);
      }
      if (cfg_.update.hyper) {
        if (walk_on) {
          move_log_b_centered();
          move_beta_centered();
        }
        move_log_sigma();
        move_hyper_block();
        if (walk_on) move_rescale();
      }
      s_.walk_term = ChainState::walk_value(s_.w, s_.ls);

      if (adapting_) {
        for (std::size_t t = 0; t < cb_.size(); ++t) {
          const double full[3] = {s_.la[t], s_.lg[t], s_.lbt[t]};
          for (std::size_t k = 0; k < block_dims_.size(); ++k)
            obs[k] = full[block_dims_[k]];
          cb_[t].observe(std::span<const double>(obs.data(), block_dims_.size()));
          if (cb_[t].observations() % 50 == 0) cb_[t].refresh();
        }
        if (!cb_.empty() && cb_[0].observations() >= static_cast<std::uint64_t>(cfg_.block_adapt_start))
          blocks_ready = true;
        const double hb[2] = {s_.log_b, s_.beta};
        hyper_block_.observe(hb);
        if (hyper_block_.observations() % 50 == 0) hyper_block_.refresh();
      } else {
        s_.store(out.row(chain, static_cast<std::size_t>(it - cfg_.n_warmup)));
      }
    }
    if (cfg_.n_warmup == cfg_.n_iter) stats.frozen_at = cfg_.n_iter;
    stats.moves = moves_;
    stats.late_adaptation_updates = late_updates();
  }

 private:
  void tally(const char* name, bool accepted) {
    if (!recording_) return;
    auto& m = moves_[name];
    ++m.proposed;
    if (accepted) ++m.accepted;
  }

  void adapt(ScaleAdapter& a, bool accepted) {
    if (adapting_) a.update(accepted);
  }

  void move_log_a(std::size_t t) {
    const double prop = s_.la[t] + sa_[t].scale() * rng_.normal();
    const double v = s_.cohort_value(t, prop, s_.lg[t], s_.lbt[t]);
    const bool ok = accept(rng_, v - s_.cterm[t]);
    if (ok) {
      s_.la[t] = prop;
      s_.cterm[t] = v;
    }
    adapt(sa_[t], ok);
    tally("a", ok);
  }

  void move_log_gamma(std::size_t t) {
    const double prop = s_.lg[t] + sg_[t].scale() * rng_.normal();
    const double v = s_.cohort_value(t, s_.la[t], prop, s_.lbt[t]);
    const bool ok = accept(rng_, v - s_.cterm[t]);
    if (ok) {
      s_.lg[t] = prop;
      s_.cterm[t] = v;
    }
    adapt(sg_[t], ok);
    tally("gamma", ok);
  }

  // Shifts log b_t alone: w_t += delta, w_{t+1} -= delta.
  [[nodiscard]] double level_walk_delta(std::size_t t, double delta) const {
    const double inv = std::exp(-s_.ls);
    double d = ChainState::laplace_kernel(s_.w[t] + delta, inv) - ChainState::laplace_kernel(s_.w[t], inv);
    if (t + 1 < s_.size())
      d += ChainState::laplace_kernel(s_.w[t + 1] - delta, inv) -
           ChainState::laplace_kernel(s_.w[t + 1], inv);
    return d;
  }

  void apply_level(std::size_t t, double delta) {
    s_.lbt[t] += delta;
    s_.w[t] += delta;
    if (t + 1 < s_.size()) s_.w[t + 1] -= delta;
  }

  void move_level(std::size_t t) {
    const double delta = sl_[t].scale() * rng_.normal();
    const double v = s_.cohort_value(t, s_.la[t], s_.lg[t], s_.lbt[t] + delta);
    const double dw = level_walk_delta(t, delta);
    const bool ok = accept(rng_, v - s_.cterm[t] + dw);
    if (ok) {
      apply_level(t, delta);
      s_.cterm[t] = v;
    }
    adapt(sl_[t], ok);
    tally("level", ok);
  }

  void move_cohort_block(std::size_t t) {
    double step[3] = {0.0, 0.0, 0.0};
    double full[3] = {0.0, 0.0, 0.0};
    cb_[t].propose(rng_, std::span<double>(step, block_dims_.size()));
    for (std::size_t k = 0; k < block_dims_.size(); ++k) full[block_dims_[k]] = step[k];
    const double v = s_.cohort_value(t, s_.la[t] + full[0], s_.lg[t] + full[1], s_.lbt[t] + full[2]);
    const double dw = full[2] != 0.0 ? level_walk_delta(t, full[2]) : 0.0;
    const bool ok = accept(rng_, v - s_.cterm[t] + dw);
    if (ok) {
      s_.la[t] += full[0];
      s_.lg[t] += full[1];
      if (full[2] != 0.0) apply_level(t, full[2]);
      s_.cterm[t] = v;
    }
    if (adapting_) cb_[t].update(ok);
    tally("cohort_block", ok);
  }

  // log_b moves with every b_t held fixed, so w_1 absorbs the change.
  void move_log_b_centered() {
    const double delta = s_log_b_.scale() * rng_.normal();
    const double inv = std::exp(-s_.ls);
    const double h = s_.hyper_value(s_.log_b + delta, s_.beta, s_.ls);
    const double dw = ChainState::laplace_kernel(s_.w[0] - delta, inv) -
                      ChainState::laplace_kernel(s_.w[0], inv);
    const bool ok = accept(rng_, h - s_.hyper_term + dw);
    if (ok) {
      s_.log_b += delta;
      s_.w[0] -= delta;
      s_.hyper_term = h;
    }
    adapt(s_log_b_, ok);
    tally("log_b", ok);
  }

  // beta moves with every b_t held fixed, so each w_t absorbs the change.
  void move_beta_centered() {
    const double delta = s_beta_.scale() * rng_.normal();
    const double inv = std::exp(-s_.ls);
    const double h = s_.hyper_value(s_.log_b, s_.beta + delta, s_.ls);
    double dw = 0.0;
    for (double v : s_.w)
      dw += ChainState::laplace_kernel(v - delta, inv) - ChainState::laplace_kernel(v, inv);
    const bool ok = accept(rng_, h - s_.hyper_term + dw);
    if (ok) {
      s_.beta += delta;
      for (double& v : s_.w) v -= delta;
      s_.hyper_term = h;
    }
    adapt(s_beta_, ok);
    tally("beta", ok);
  }

  void move_log_sigma() {
    const double prop = s_.ls + s_sigma_.scale() * rng_.normal();
    const double h = s_.hyper_value(s_.log_b, s_.beta, prop);
    const double wv = ChainState::walk_value(s_.w, prop);
    const double current = ChainState::walk_value(s_.w, s_.ls);
    const bool ok = accept(rng_, h - s_.hyper_term + wv - current);
    if (ok) {
      s_.ls = prop;
      s_.hyper_term = h;
      s_.walk_term = wv;
    }
    adapt(s_sigma_, ok);
    tally("sigma_rw", ok);
  }

  // Joint (log_b, beta) move with the innovations fixed; every b_t shifts.
  void move_hyper_block() {
    double step[2];
    hyper_block_.propose(rng_, step);
    const double h = s_.hyper_value(s_.log_b + step[0], s_.beta + step[1], s_.ls);
    prop_terms_.resize(s_.size());
    double d = h - s_.hyper_term;
    for (std::size_t t = 0; t < s_.size() && std::isfinite(d); ++t) {
      const double shift = step[0] + step[1] * static_cast<double>(t + 1);
      prop_terms_[t] = s_.cohort_value(t, s_.la[t], s_.lg[t], s_.lbt[t] + shift);
      d += prop_terms_[t] - s_.cterm[t];
    }
    const bool ok = accept(rng_, d);
    if (ok) {
      s_.log_b += step[0];
      s_.beta += step[1];
      for (std::size_t t = 0; t < s_.size(); ++t)
        s_.lbt[t] += step[0] + step[1] * static_cast<double>(t + 1);
      s_.cterm.swap(prop_terms_);
      s_.hyper_term = h;
    }
    if (adapting_) hyper_block_.update(ok);
    tally("hyper_block", ok);
  }

  // sigma_rw -> sigma_rw e^delta with w -> w e^delta; Jacobian e^{T delta}.
  void move_rescale() {
    const double delta = s_rescale_.scale() * rng_.normal();
    const double factor = std::exp(delta);
    const double ls_new = s_.ls + delta;
    prop_w_.resize(s_.size());
    for (std::size_t t = 0; t < s_.size(); ++t) prop_w_[t] = s_.w[t] * factor;
    const double h = s_.hyper_value(s_.log_b, s_.beta, ls_new);
    const double wv = ChainState::walk_value(prop_w_, ls_new);
    const double current = ChainState::walk_value(s_.w, s_.ls);
    double d = h - s_.hyper_term + wv - current + static_cast<double>(s_.size()) * delta;
    prop_terms_.resize(s_.size());
    prop_lbt_.resize(s_.size());
    double x = 0.0;
    for (std::size_t t = 0; t < s_.size() && std::isfinite(d); ++t) {
      x += s_.beta + prop_w_[t];
      prop_lbt_[t] = s_.log_b + x;
      prop_terms_[t] = s_.cohort_value(t, s_.la[t], s_.lg[t], prop_lbt_[t]);
      d += prop_terms_[t] - s_.cterm[t];
    }
    const bool ok = accept(rng_, d);
    if (ok) {
      s_.w.swap(prop_w_);
      s_.lbt.swap(prop_lbt_);
      s_.cterm.swap(prop_terms_);
      s_.ls = ls_new;
      s_.hyper_term = h;
      s_.walk_term = wv;
    }
    adapt(s_rescale_, ok);
    tally("rescale", ok);
  }

  void freeze_all() {
    for (auto& a : sa_) a.freeze();
    for (auto& a : sg_) a.freeze();
    for (auto& a : sl_) a.freeze();
    for (auto& a : cb_) a.freeze();
    s_log_b_.freeze();
    s_beta_.freeze();
    s_sigma_.freeze();
    s_rescale_.freeze();
    hyper_block_.freeze();
  }

  [[nodiscard]] std::uint64_t late_updates() const {
    std::uint64_t n = 0;
    for (const auto& a : sa_) n += a.late_updates();
    for (const auto& a : sg_) n += a.late_updates();
    for (const auto& a : sl_) n += a.late_updates();
    for (const auto& a : cb_) n += a.scale().late_updates();
    n += s_log_b_.late_updates() + s_beta_.late_updates() + s_sigma_.late_updates() +
         s_rescale_.late_updates() + hyper_block_.scale().late_updates();
    return n;
  }

  const SamplerConfig& cfg_;
  Random rng_;
  ChainState s_;
  std::vector<ScaleAdapter> sa_, sg_, sl_;
  std::vector<CovarianceAdapter> cb_;
  std::vector<int> block_dims_;
  ScaleAdapter s_log_b_, s_beta_, s_sigma_, s_rescale_;
  CovarianceAdapter hyper_block_;
  std::vector<double> prop_terms_, prop_w_, prop_lbt_;
  std::map<std::string, MoveStats> moves_;
  bool adapting_ = true;
  bool recording_ = false;
};

ModelParameters jitter(const ModelParameters& base, const SamplerConfig& cfg, Random& rng) {
  ModelParameters p = base;
  const double j = cfg.init_jitter;
  if (j == 0.0) return p;
  const auto& u = cfg.update;
  for (std::size_t t = 0; t < p.a.size(); ++t) {
    if (u.a) p.a[t] *= std::exp(0.1 * j * rng.normal());
    if (u.gamma) p.gamma[t] *= std::exp(0.3 * j * rng.normal());
    if (u.walk) p.walk.w[t] += 0.005 * j * rng.normal();
  }
  if (u.hyper) {
    p.walk.log_b += 0.05 * j * rng.normal();
    p.walk.beta += 0.002 * j * rng.normal();
    p.walk.sigma_rw *= std::exp(0.2 * j * rng.normal());
  }
  return p;
}

}  // namespace

void SamplerConfig::validate() const {
  if (n_chains < 2) throw ArgumentError("sampler.n_chains must be >= 2");
  if (n_warmup < 0 || n_iter <= 0 || n_warmup >= n_iter)
    throw ArgumentError("sampler.n_warmup must be in [0, n_iter)");
  if (!(target_accept > 0.0 && target_accept < 1.0))
    throw ArgumentError("sampler.target_accept must be in (0, 1)");
  if (!(block_target_accept > 0.0 && block_target_accept < 1.0))
    throw ArgumentError("sampler.block_target_accept must be in (0, 1)");
  if (!(adapt_gain > 0.0) || !(adapt_decay > 0.5 && adapt_decay <= 1.0))
    throw ArgumentError("sampler.adapt_decay must be in (0.5, 1] with adapt_gain > 0");
  if (block_adapt_start < 2) throw ArgumentError("sampler.block_adapt_start must be >= 2");
  if (block_repeats < 1) throw ArgumentError("sampler.block_repeats must be >= 1");
  if (max_init_attempts < 1) throw ArgumentError("sampler.max_init_attempts must be >= 1");
  if (!(init_jitter >= 0.0)) throw ArgumentError("sampler.init_jitter must be >= 0");
}

ScaleAdapter::ScaleAdapter(double initial_scale, double target, double gain, double decay)
    : log_scale_(std::log(initial_scale)), target_(target), gain_(gain), decay_(decay) {}

void ScaleAdapter::update(bool accepted) noexcept {
  if (frozen_) {
    ++late_updates_;
    return;
  }
  const double step = gain_ * std::pow(static_cast<double>(updates_ + 1), -decay_);
  log_scale_ += step * ((accepted ? 1.0 : 0.0) - target_);
  log_scale_ = std::clamp(log_scale_, -30.0, 10.0);
  ++updates_;
}

CovarianceAdapter::CovarianceAdapter(std::vector<double> initial_sd, double target, double gain,
                                     double decay)
    : scale_(2.38 / std::sqrt(static_cast<double>(initial_sd.size())), target, gain, decay) {
  if (initial_sd.empty() || initial_sd.size() > kMaxBlockDim)
    throw ArgumentError("block dimension must be in [1, " + std::to_string(kMaxBlockDim) + "]");
  const auto d = static_cast<Eigen::Index>(initial_sd.size());
  mean_ = Eigen::VectorXd::Zero(d);
  m2_ = Eigen::MatrixXd::Zero(d, d);
  chol_ = Eigen::MatrixXd::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i) chol_(i, i) = initial_sd[static_cast<std::size_t>(i)];
}

void CovarianceAdapter::observe(std::span<const double> x) {
  if (frozen_) return;
  const Eigen::Map<const Eigen::VectorXd> v(x.data(), static_cast<Eigen::Index>(x.size()));
  ++count_;
  const Eigen::VectorXd delta = v - mean_;
  mean_ += delta / static_cast<double>(count_);
  m2_ += delta * (v - mean_).transpose();
}

void CovarianceAdapter::reset() noexcept {
  if (frozen_) return;
  count_ = 0;
  mean_.setZero();
  m2_.setZero();
}

void CovarianceAdapter::refresh() {
  if (frozen_ || count_ < dim() + 2) return;
  Eigen::MatrixXd cov = m2_ / static_cast<double>(count_ - 1);
  const double ridge = 1e-10 + 1e-6 * cov.diagonal().maxCoeff();
  cov.diagonal().array() += ridge;
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() == Eigen::Success) chol_ = llt.matrixL();
}

void CovarianceAdapter::propose(Random& rng, std::span<double> step) const {
  const auto d = static_cast<Eigen::Index>(dim());
  const double scale = scale_.scale();
  double z[kMaxBlockDim];
  for (Eigen::Index i = 0; i < d; ++i) z[i] = rng.normal();
  for (Eigen::Index i = 0; i < d; ++i) {
    double s = 0.0;
    for (Eigen::Index j = 0; j <= i; ++j) s += chol_(i, j) * z[j];
    step[static_cast<std::size_t>(i)] = scale * s;
  }
}

PosteriorDraws::PosteriorDraws(std::size_t n_chains, std::size_t n_draws, std::size_t n_cohorts)
    : stats(n_chains),
      n_chains_(n_chains),
      n_draws_(n_draws),
      n_cohorts_(n_cohorts),
      values_(n_chains * n_draws * (3 * n_cohorts + 3), 0.0) {}

std::vector<std::string> PosteriorDraws::names() const {
  std::vector<std::string> out;
  out.reserve(n_params());
  for (const char* prefix : {"a", "gamma", "w"})
    for (std::size_t t = 1; t <= n_cohorts_; ++t)
      out.push_back(std::string(prefix) + "[" + std::to_string(t) + "]");
  out.emplace_back("log_b");
  out.emplace_back("beta");
  out.emplace_back("sigma_rw");
  return out;
}

std::size_t PosteriorDraws::index_of(const std::string& name) const {
  const auto n = names();
  const auto it = std::find(n.begin(), n.end(), name);
  if (it == n.end()) throw ArgumentError("unknown parameter '" + name + "'");
  return static_cast<std::size_t>(it - n.begin());
}

std::span<double> PosteriorDraws::row(std::size_t chain, std::size_t draw) {
  return std::span<double>(values_).subspan((chain * n_draws_ + draw) * n_params(), n_params());
}

std::span<const double> PosteriorDraws::row(std::size_t chain, std::size_t draw) const {
  return std::span<const double>(values_).subspan((chain * n_draws_ + draw) * n_params(), n_params());
}

std::vector<std::vector<double>> PosteriorDraws::chains(std::size_t param) const {
  std::vector<std::vector<double>> out(n_chains_, std::vector<double>(n_draws_));
  for (std::size_t c = 0; c < n_chains_; ++c)
    for (std::size_t i = 0; i < n_draws_; ++i) out[c][i] = at(c, i, param);
  return out;
}

std::vector<double> PosteriorDraws::pooled(std::size_t param) const {
  std::vector<double> out;
  out.reserve(total_draws());
  for (std::size_t c = 0; c < n_chains_; ++c)
    for (std::size_t i = 0; i < n_draws_; ++i) out.push_back(at(c, i, param));
  return out;
}

std::vector<std::vector<double>> PosteriorDraws::derived(
    const std::function<double(std::span<const double>)>& f) const {
  std::vector<std::vector<double>> out(n_chains_, std::vector<double>(n_draws_));
  for (std::size_t c = 0; c < n_chains_; ++c)
    for (std::size_t i = 0; i < n_draws_; ++i) out[c][i] = f(row(c, i));
  return out;
}

ModelParameters PosteriorDraws::params(std::size_t chain, std::size_t draw) const {
  const auto r = row(chain, draw);
  const std::size_t n = n_cohorts_;
  ModelParameters p;
  p.a.assign(r.begin(), r.begin() + static_cast<std::ptrdiff_t>(n));
  p.gamma.assign(r.begin() + static_cast<std::ptrdiff_t>(n), r.begin() + static_cast<std::ptrdiff_t>(2 * n));
  p.walk.w.assign(r.begin() + static_cast<std::ptrdiff_t>(2 * n), r.begin() + static_cast<std::ptrdiff_t>(3 * n));
  p.walk.log_b = r[log_b_index()];
  p.walk.beta = r[beta_index()];
  p.walk.sigma_rw = r[sigma_index()];
  return p;
}

std::vector<double> PosteriorDraws::unconstrained(std::size_t chain, std::size_t draw) const {
  const auto r = row(chain, draw);
  std::vector<double> out(r.begin(), r.end());
  for (std::size_t t = 0; t < 2 * n_cohorts_; ++t) out[t] = std::log(out[t]);
  out[sigma_index()] = std::log(out[sigma_index()]);
  return out;
}

std::vector<double> PosteriorDraws::log_slopes(std::size_t chain, std::size_t draw) const {
  const auto r = row(chain, draw);
  std::vector<double> out(n_cohorts_);
  double x = 0.0;
  for (std::size_t t = 0; t < n_cohorts_; ++t) {
    x += r[beta_index()] + r[w_index(t)];
    out[t] = r[log_b_index()] + x;
  }
  return out;
}

ModelParameters default_initial(const CohortDataset& data) {
  const std::size_t n = data.n_cohorts();
  ModelParameters p;
  p.a.assign(n, 0.05);
  p.gamma.assign(n, 0.5);
  p.walk.w.assign(n, 0.0);
  p.walk.log_b = std::log(0.1);
  p.walk.beta = 0.0;
  p.walk.sigma_rw = 0.05;
  for (std::size_t t = 0; t < n; ++t) {
    const auto d = data.deaths(t);
    const auto e = data.exposures(t);
    const auto m = data.mask(t);
    for (std::size_t k = 0; k < data.n_ages(); ++k) {
      if (m[k] == 0 || e[k] <= 0.0) continue;
      if (d[k] > 0) {
        const double crude = static_cast<double>(d[k]) / e[k];
        p.a[t] = std::clamp(crude * std::exp(-0.1 * (static_cast<double>(k) + 0.5)), 1e-5, 2.0);
      }
      break;
    }
  }
  return p;
}

double log_target(const ModelParameters& params, const CohortDataset& data, const PriorConfig& priors) {
  double lp = posterior::log_posterior(params, data, priors);
  if (lp == kNegInf) return lp;
  for (std::size_t t = 0; t < params.n_cohorts(); ++t)
    lp += std::log(params.a[t]) + std::log(params.gamma[t]);
  return lp + std::log(params.walk.sigma_rw);
}

PosteriorDraws run_chains(const CohortDataset& data, const SamplerConfig& cfg, const PriorConfig& priors) {
  cfg.validate();
  priors.validate();
  if (data.empty()) throw ArgumentError("dataset has no cohorts");
  const ModelParameters base = cfg.initial ? *cfg.initial : default_initial(data);
  if (base.n_cohorts() != data.n_cohorts())
    throw ArgumentError("initial parameters do not match the number of cohorts");
  const LikelihoodCache lik(data);
  const auto n_chains = static_cast<std::size_t>(cfg.n_chains);
  PosteriorDraws draws(n_chains, static_cast<std::size_t>(cfg.n_draws()), data.n_cohorts());

  run_workers(cfg.n_chains, cfg.threads, [&](int c) {
    const auto chain = static_cast<std::size_t>(c);
    const std::uint64_t seed = derive_seed(cfg.seed, chain);
    Random init_rng(derive_seed(seed, 0xC0FFEE));
    ModelParameters start;
    double lt = kNegInf;
    int attempt = 0;
    while (attempt < cfg.max_init_attempts && lt == kNegInf) {
      ++attempt;
      start = attempt == cfg.max_init_attempts ? base : jitter(base, cfg, init_rng);
      try {
        start.validate();
        const double l = posterior::log_prior(start, priors) + lik.total(start);
        lt = std::isfinite(l) ? l : kNegInf;
      } catch (const DomainError&) {
        lt = kNegInf;
      }
    }
    if (lt == kNegInf)
      throw FitError("chain " + std::to_string(c + 1) + ": log-posterior is -inf at all " +
                     std::to_string(cfg.max_init_attempts) +
                     " attempted starting points; check exposures, deaths and initial values");
    ChainStats& stats = draws.stats[chain];
    stats.seed = seed;
    stats.init_attempts = attempt;
    ModelChain mc(lik, priors, cfg, start, seed);
    mc.run(draws, chain, stats);
  });
  return draws;
}

std::vector<std::vector<double>> GenericDraws::chains(std::size_t coord) const {
  std::vector<std::vector<double>> out(n_chains, std::vector<double>(n_draws));
  for (std::size_t c = 0; c < n_chains; ++c)
    for (std::size_t i = 0; i < n_draws; ++i) out[c][i] = values[(c * n_draws + i) * dim + coord];
  return out;
}

std::vector<double> GenericDraws::pooled(std::size_t coord) const {
  std::vector<double> out;
  out.reserve(n_chains * n_draws);
  for (const auto& ch : chains(coord)) out.insert(out.end(), ch.begin(), ch.end());
  return out;
}

GenericDraws run_generic(const LogDensity& log_density, std::vector<double> initial,
                         const SamplerConfig& cfg) {
  cfg.validate();
  if (initial.empty()) throw ArgumentError("initial point must be non-empty");
  GenericDraws out;
  out.n_chains = static_cast<std::size_t>(cfg.n_chains);
  out.n_draws = static_cast<std::size_t>(cfg.n_draws());
  out.dim = initial.size();
  out.values.assign(out.n_chains * out.n_draws * out.dim, 0.0);

  run_workers(cfg.n_chains, cfg.threads, [&](int c) {
    Random rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(c)));
    std::vector<double> x = initial;
    double lp = kNegInf;
    for (int attempt = 0; attempt < cfg.max_init_attempts && !std::isfinite(lp); ++attempt) {
      x = initial;
      if (attempt + 1 < cfg.max_init_attempts)
        for (double& v : x) v += 0.1 * cfg.init_jitter * rng.normal();
      lp = log_density(x);
    }
    if (!std::isfinite(lp))
      throw FitError("chain " + std::to_string(c + 1) + ": no finite starting point");
    std::vector<ScaleAdapter> scales(x.size(),
                                     ScaleAdapter(1.0, cfg.target_accept, cfg.adapt_gain, cfg.adapt_decay));
    for (int it = 0; it < cfg.n_iter; ++it) {
      const bool adapting = it < cfg.n_warmup;
      if (it == cfg.n_warmup)
        for (auto& s : scales) s.freeze();
      for (std::size_t k = 0; k < x.size(); ++k) {
        const double old = x[k];
        x[k] = old + scales[k].scale() * rng.normal();
        const double prop = log_density(x);
        const bool ok = accept(rng, prop - lp);
        if (ok)
          lp = prop;
        else
          x[k] = old;
        if (adapting) scales[k].update(ok);
      }
      if (!adapting) {
        const std::size_t draw = static_cast<std::size_t>(it - cfg.n_warmup);
        std::copy(x.begin(), x.end(),
                  out.values.begin() +
                      static_cast<std::ptrdiff_t>((static_cast<std::size_t>(c) * out.n_draws + draw) * out.dim));
      }
    }
  });
  return out;
}

}  // namespace ggdrift::mcmc
