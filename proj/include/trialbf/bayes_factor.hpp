#pragma once

// Closed-form Bayes factors against the sharp null H0: theta = 0, given a
// normal likelihood for the log-scale estimate. Everything is computed and
// stored in natural-log space; bf = exp(log_bf) is display-level and may
// under- or overflow while log_bf stays finite.

#include <cmath>

#include "trialbf/effect.hpp"
#include "trialbf/errors.hpp"
#include "trialbf/normal.hpp"
#include "trialbf/prior.hpp"

namespace trialbf {

enum class BfKind { bf10, bf_plus0, bf_minus0, point };

inline const char* to_string(BfKind k) {
  switch (k) {
    case BfKind::bf10: return "bf10";
    case BfKind::bf_plus0: return "bf_plus0";
    case BfKind::bf_minus0: return "bf_minus0";
    default: return "point";
  }
}

struct BayesFactorResult {
  double log_bf = 0.0;
  double bf = 1.0;  // exp(log_bf); display only, log_bf is the authority
  PriorSpec prior;
  LogEffect effect;
  BfKind kind = BfKind::bf10;
};

namespace detail {

inline BayesFactorResult make_bf_result(double log_bf, const PriorSpec& prior,
                                        const LogEffect& effect, BfKind kind) {
  if (!std::isfinite(log_bf)) {
    throw domain_error("bayes factor: non-finite log BF from intermediate overflow");
  }
  return BayesFactorResult{log_bf, std::exp(log_bf), prior, effect, kind};
}

}  // namespace detail

/// BF for a point prior at mu. Algebraic form (2*theta_hat*mu - mu^2)/(2*sigma^2)
/// keeps the reflection identity log_bf(theta_hat, mu) = log_bf(-theta_hat, -mu)
/// bit-exact: negations cancel inside each product.
inline BayesFactorResult bf_point(const LogEffect& effect, double mu) {
  effect.validate();
  if (!std::isfinite(mu)) {
    throw domain_error("bf_point: mu must be finite");
  }
  const double log_bf =
      (2.0 * effect.theta_hat * mu - mu * mu) / (2.0 * effect.sigma * effect.sigma);
  return detail::make_bf_result(log_bf, PriorSpec{mu, 0.0, Truncation::none}, effect,
                                BfKind::point);
}

/// BF10 for an untruncated normal prior: the marginal likelihood under H1 is
/// N(theta_hat | mu, sigma^2 + tau^2). tau = 0 reduces to the point prior.
inline BayesFactorResult bf_normal(const LogEffect& effect, const PriorSpec& prior) {
  effect.validate();
  prior.validate();
  if (prior.truncation != Truncation::none) {
    throw domain_error("bf_normal: prior must be untruncated, use bf_trunc");
  }
  if (prior.point()) {
    return bf_point(effect, prior.mu);
  }
  const double s2 = effect.sigma * effect.sigma;
  const double log_bf = normal_log_pdf(effect.theta_hat, prior.mu, s2 + prior.tau * prior.tau) -
                        normal_log_pdf(effect.theta_hat, 0.0, s2);
  return detail::make_bf_result(log_bf, prior, effect, BfKind::bf10);
}

/// BF for a one-sided truncated normal prior. On top of the untruncated
/// log BF the truncation contributes ln Phi(s/sqrt(q)) - ln Phi(mu/tau) with
/// s = theta_hat/sigma^2 + mu/tau^2 and q = 1/sigma^2 + 1/tau^2 (arguments
/// negated for the negative side). Both Phi terms go through the log-CDF so
/// deep-tail priors keep full precision instead of rounding to 0 or 1.
inline BayesFactorResult bf_trunc(const LogEffect& effect, const PriorSpec& prior) {
  effect.validate();
  prior.validate();
  if (prior.truncation == Truncation::none) {
    throw domain_error("bf_trunc: prior carries no truncation, use bf_normal");
  }
  if (prior.point()) {
    // validate() already rejected point masses outside the open support;
    // a supported point mass renormalizes to itself, so truncation is moot.
    auto result = bf_point(effect, prior.mu);
    result.prior = prior;
    return result;
  }
  const double s2 = effect.sigma * effect.sigma;
  const double t2 = prior.tau * prior.tau;
  const double base = normal_log_pdf(effect.theta_hat, prior.mu, s2 + t2) -
                      normal_log_pdf(effect.theta_hat, 0.0, s2);
  const double s = effect.theta_hat / s2 + prior.mu / t2;
  const double q = 1.0 / s2 + 1.0 / t2;
  const double z_posterior = s / std::sqrt(q);
  const double z_prior = prior.mu / prior.tau;

  double log_bf;
  BfKind kind;
  if (prior.truncation == Truncation::positive_only) {
    log_bf = base + std_normal_log_cdf(z_posterior) - std_normal_log_cdf(z_prior);
    kind = BfKind::bf_plus0;
  } else {
    log_bf = base + std_normal_log_cdf(-z_posterior) - std_normal_log_cdf(-z_prior);
    kind = BfKind::bf_minus0;
  }
  return detail::make_bf_result(log_bf, prior, effect, kind);
}

/// Default prior centered on no effect whose variance matches the information
/// in a single observation: tau^2 = effective_n * sigma^2.
inline BayesFactorResult bf_unit_information(const LogEffect& effect, double effective_n,
                                             Truncation truncation = Truncation::none) {
  effect.validate();
  if (!(effective_n > 0.0) || !std::isfinite(effective_n)) {
    throw domain_error("unit-information prior: effective_n must be positive and finite");
  }
  PriorSpec prior;
  prior.mu = 0.0;
  prior.tau = std::sqrt(effective_n) * effect.sigma;
  prior.truncation = truncation;
  return truncation == Truncation::none ? bf_normal(effect, prior) : bf_trunc(effect, prior);
}

/// Posterior odds = BF * prior odds.
inline double posterior_odds(double bf, double prior_odds) {
  if (!(bf > 0.0) || !(prior_odds > 0.0)) {
    throw domain_error("posterior_odds: bayes factor and prior odds must be positive");
  }
  return bf * prior_odds;
}

}  // namespace trialbf
