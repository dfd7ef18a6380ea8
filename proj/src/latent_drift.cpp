#include "ggdrift/latent_drift.hpp"

#include <cmath>
#include <string>

#include "ggdrift/errors.hpp"

namespace ggdrift::walk {

void LatentWalk::validate() const {
  if (!std::isfinite(log_b) || !std::isfinite(beta) || !std::isfinite(sigma_rw))
    throw DomainError("latent walk parameters must be finite");
  if (sigma_rw <= 0.0) throw DomainError("sigma_rw must be > 0");
  for (double v : w)
    if (!std::isfinite(v)) throw DomainError("innovations must be finite");
}

std::vector<double> log_slopes(const LatentWalk& lw) {
  std::vector<double> out(lw.w.size());
  double x = 0.0;
  for (std::size_t t = 0; t < lw.w.size(); ++t) {
    x += lw.beta + lw.w[t];
    out[t] = lw.log_b + x;
  }
  return out;
}

SlopeSeries reconstruct(const LatentWalk& lw, std::span<const int> cohorts) {
  if (cohorts.size() != lw.w.size())
    throw ArgumentError("got " + std::to_string(cohorts.size()) + " cohort labels for " +
                        std::to_string(lw.w.size()) + " innovations");
  SlopeSeries s;
  s.cohorts.assign(cohorts.begin(), cohorts.end());
  s.x.resize(lw.w.size());
  s.b.resize(lw.w.size());
  double x = 0.0;
  for (std::size_t t = 0; t < lw.w.size(); ++t) {
    x += lw.beta + lw.w[t];
    s.x[t] = x;
    s.b[t] = std::exp(lw.log_b + x);
  }
  return s;
}

double laplace_logpdf(double x, double mu, double scale) {
  if (!(scale > 0.0)) throw DomainError("Laplace scale must be > 0");
  return -std::log(2.0 * scale) - std::abs(x - mu) / scale;
}

double walk_logprior(const LatentWalk& lw) {
  lw.validate();
  const double norm = -std::log(2.0 * lw.sigma_rw);
  double abs_sum = 0.0;
  for (double v : lw.w) abs_sum += std::abs(v);
  return static_cast<double>(lw.w.size()) * norm - abs_sum / lw.sigma_rw;
}

}  // namespace ggdrift::walk
