#include "ggdrift/posterior.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "ggdrift/errors.hpp"
#include "ggdrift/gg_model.hpp"

namespace ggdrift::posterior {

namespace {

constexpr double kStableSwitch = 30.0;
const double kLogSqrt2Pi = 0.5 * std::log(2.0 * std::numbers::pi);

}  // namespace

double PriorConfig::log_b_sd() const noexcept {
  return normal_second_is_sd ? log_b_second : std::sqrt(log_b_second);
}

double PriorConfig::beta_sd() const noexcept {
  return normal_second_is_sd ? beta_second : std::sqrt(beta_second);
}

double PriorConfig::gamma_rate() const noexcept {
  return gamma_second_is_rate ? gamma_second : 1.0 / gamma_second;
}

void PriorConfig::validate() const {
  if (!(a_scale > 0.0)) throw ArgumentError("priors.a_scale must be > 0");
  if (!(gamma_shape > 0.0)) throw ArgumentError("priors.gamma_shape must be > 0");
  if (!(gamma_second > 0.0)) throw ArgumentError("priors.gamma_second must be > 0");
  if (!(log_b_second > 0.0)) throw ArgumentError("priors.log_b_second must be > 0");
  if (!(beta_second > 0.0)) throw ArgumentError("priors.beta_second must be > 0");
  if (!(sigma_scale > 0.0)) throw ArgumentError("priors.sigma_scale must be > 0");
}

void ModelParameters::validate() const {
  if (gamma.size() != a.size() || walk.w.size() != a.size())
    throw DomainError("a, gamma and w must have one entry per cohort");
  for (std::size_t t = 0; t < a.size(); ++t) {
    if (!(a[t] > 0.0) || !std::isfinite(a[t])) throw DomainError("a[" + std::to_string(t + 1) + "] must be > 0");
    if (!(gamma[t] > 0.0) || !std::isfinite(gamma[t]))
      throw DomainError("gamma[" + std::to_string(t + 1) + "] must be > 0");
  }
  walk.validate();
  for (double lb : walk::log_slopes(walk))
    if (!std::isfinite(std::exp(lb))) throw DomainError("derived slope b_t is not finite");
}

double normal_logpdf(double x, double mean, double sd) {
  if (!(sd > 0.0) || !std::isfinite(x)) return kNegInf;
  const double z = (x - mean) / sd;
  return -kLogSqrt2Pi - std::log(sd) - 0.5 * z * z;
}

double half_normal_logpdf(double x, double scale) {
  if (!(x >= 0.0) || !std::isfinite(x) || !(scale > 0.0)) return kNegInf;
  const double z = x / scale;
  return std::log(2.0) - kLogSqrt2Pi - std::log(scale) - 0.5 * z * z;
}

double gamma_logpdf(double x, double shape, double rate) {
  if (!(x > 0.0) || !std::isfinite(x) || !(shape > 0.0) || !(rate > 0.0)) return kNegInf;
  return shape * std::log(rate) - std::lgamma(shape) + (shape - 1.0) * std::log(x) - rate * x;
}

double poisson_logpmf(std::int64_t k, double mean) {
  if (k < 0 || !(mean >= 0.0)) return kNegInf;
  if (mean == 0.0) return k == 0 ? 0.0 : kNegInf;
  const auto kd = static_cast<double>(k);
  return kd * std::log(mean) - mean - std::lgamma(kd + 1.0);
}

LikelihoodCache::LikelihoodCache(const CohortDataset& data) {
  const std::size_t n_ages = data.n_ages();
  cohorts_.resize(data.n_cohorts());
  for (std::size_t t = 0; t < data.n_cohorts(); ++t) {
    Row& row = cohorts_[t];
    row.deaths.assign(n_ages, 0.0);
    row.exposure.assign(n_ages, 0.0);
    const auto d = data.deaths(t);
    const auto e = data.exposures(t);
    const auto m = data.mask(t);
    for (std::size_t k = 0; k < n_ages; ++k) {
      if (m[k] == 0 || e[k] == 0.0) continue;
      const auto dk = static_cast<double>(d[k]);
      row.deaths[k] = dk;
      row.exposure[k] = e[k];
      row.constant += dk * std::log(e[k]) - std::lgamma(dk + 1.0);
      row.last_age = static_cast<int>(k);
    }
  }
}

double LikelihoodCache::cohort(std::size_t t, double a, double b, double gamma) const {
  const Row& row = cohorts_[t];
  if (row.last_age < 0) return 0.0;
  const double c = gamma * a / b;
  double ll = row.constant;
  if (b * (row.last_age + 0.5) <= kStableSwitch) {
    // e^{b(k+1/2)} by recurrence.
    const double step = std::exp(b);
    double growth = std::exp(0.5 * b);
    for (int k = 0; k <= row.last_age; ++k, growth *= step) {
      const double e = row.exposure[k];
      if (e == 0.0) continue;
      const double mu = a * growth / (1.0 + c * (growth - 1.0));
      const double d = row.deaths[k];
      ll += (d > 0.0 ? d * std::log(mu) : 0.0) - mu * e;
    }
  } else {
    const double log_a = std::log(a);
    for (int k = 0; k <= row.last_age; ++k) {
      const double e = row.exposure[k];
      if (e == 0.0) continue;
      const double bx = b * (k + 0.5);
      const double log_mu = log_a - std::log(std::exp(-bx) - c * std::expm1(-bx));
      const double d = row.deaths[k];
      ll += d * log_mu - std::exp(log_mu) * e;
    }
  }
  return std::isnan(ll) ? kNegInf : ll;
}

double LikelihoodCache::total(const ModelParameters& params) const {
  if (params.n_cohorts() != cohorts_.size())
    throw ArgumentError("parameters cover " + std::to_string(params.n_cohorts()) +
                        " cohorts but data has " + std::to_string(cohorts_.size()));
  const auto log_b = walk::log_slopes(params.walk);
  double ll = 0.0;
  for (std::size_t t = 0; t < cohorts_.size(); ++t) {
    ll += cohort(t, params.a[t], std::exp(log_b[t]), params.gamma[t]);
    if (ll == kNegInf) return ll;
  }
  return ll;
}

double log_likelihood(const ModelParameters& params, const CohortDataset& data) {
  return LikelihoodCache(data).total(params);
}

double log_prior(const ModelParameters& params, const PriorConfig& priors) {
  const std::size_t n = params.a.size();
  if (params.gamma.size() != n || params.walk.w.size() != n)
    throw ArgumentError("a, gamma and w must have one entry per cohort");
  const auto& lw = params.walk;
  if (!(lw.sigma_rw > 0.0) || !std::isfinite(lw.sigma_rw)) return kNegInf;
  double lp = 0.0;
  const double rate = priors.gamma_rate();
  for (std::size_t t = 0; t < n; ++t) {
    if (!(params.a[t] > 0.0) || !(params.gamma[t] > 0.0)) return kNegInf;
    lp += half_normal_logpdf(params.a[t], priors.a_scale);
    lp += gamma_logpdf(params.gamma[t], priors.gamma_shape, rate);
  }
  lp += normal_logpdf(lw.log_b, priors.log_b_mean, priors.log_b_sd());
  lp += normal_logpdf(lw.beta, priors.beta_mean, priors.beta_sd());
  lp += half_normal_logpdf(lw.sigma_rw, priors.sigma_scale);
  for (double v : lw.w) {
    if (!std::isfinite(v)) return kNegInf;
    lp += walk::laplace_logpdf(v, 0.0, lw.sigma_rw);
  }
  return std::isnan(lp) ? kNegInf : lp;
}

double log_posterior(const ModelParameters& params, const CohortDataset& data,
                     const PriorConfig& priors) {
  const double lp = log_prior(params, priors);
  if (lp == kNegInf) return lp;
  return lp + log_likelihood(params, data);
}

}  // namespace ggdrift::posterior
