#pragma once

// Reverse-Bayes analysis: for each prior sd tau, the interval of prior means
// mu whose Bayes factor reaches a threshold gamma. Untruncated intervals have
// a closed form; truncated ones are found by a maximizer search plus
// bisection on each flank, restricted to the truncation support.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "trialbf/bayes_factor.hpp"
#include "trialbf/effect.hpp"
#include "trialbf/errors.hpp"
#include "trialbf/prior.hpp"

namespace trialbf {

/// mu range with BF >= gamma at one tau. A clamped side means the region
/// kept growing past the truncation support and was cut at the edge, so BF
/// at that endpoint exceeds gamma instead of equaling it.
struct MuInterval {
  double mu_low = 0.0;
  double mu_high = 0.0;
  bool low_clamped = false;
  bool high_clamped = false;
};

struct ReverseBayesRegion {
  double threshold_gamma = 1.0;
  std::vector<double> tau_axis;
  std::vector<std::optional<MuInterval>> intervals;
  std::optional<double> largest_tau_with_interval;
  LogEffect effect;
  Truncation truncation = Truncation::none;
};

namespace detail {

inline double rb_point_tolerance(double a, double b) {
  return 1e-13 * std::max({1.0, std::abs(a), std::abs(b)});
}

/// Maximize a unimodal f on [a, b] by golden-section search.
template <class F>
double golden_max(F&& f, double a, double b) {
  constexpr double inv_phi = 0.6180339887498948482;
  const double tol = rb_point_tolerance(a, b);
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int i = 0; i < 300 && (b - a) > tol; ++i) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    }
  }
  return 0.5 * (a + b);
}

/// Find f = target inside [a, b], where f - target changes sign across it.
template <class F>
double bisect_to_target(F&& f, double a, double b, double target) {
  const bool low_side_ge = f(a) >= target;
  for (int i = 0; i < 200 && (b - a) > rb_point_tolerance(a, b); ++i) {
    const double mid = 0.5 * (a + b);
    if ((f(mid) >= target) == low_side_ge) {
      a = mid;
    } else {
      b = mid;
    }
  }
  return 0.5 * (a + b);
}

/// Truncated-positive interval for tau > 0, searched over mu in [0, inf).
inline std::optional<MuInterval> rb_trunc_positive(const LogEffect& effect, double tau,
                                                   double target) {
  const auto f = [&](double mu) {
    return bf_trunc(effect, PriorSpec{mu, tau, Truncation::positive_only}).log_bf;
  };
  const double spread = std::sqrt(effect.sigma * effect.sigma + tau * tau);
  const double bracket_hi = std::max(0.0, effect.theta_hat) + 20.0 * spread;

  double mu_star = golden_max(f, 0.0, bracket_hi);
  double f_star = f(mu_star);
  const double f_edge = f(0.0);
  if (f_edge > f_star) {
    mu_star = 0.0;
    f_star = f_edge;
  }
  if (f_star < target) {
    return std::nullopt;
  }

  MuInterval interval;
  if (f_edge >= target) {
    interval.mu_low = 0.0;
    interval.low_clamped = f_edge > target;
  } else {
    interval.mu_low = bisect_to_target(f, 0.0, mu_star, target);
  }

  double step = spread;
  double inside = mu_star;
  double probe = mu_star + step;
  int expansions = 0;
  while (f(probe) >= target) {
    if (++expansions > 200) {
      throw oracle_failure("reverse-Bayes: right endpoint bracket failed to expand");
    }
    inside = probe;
    step *= 2.0;
    probe = mu_star + step;
  }
  interval.mu_high = bisect_to_target(f, inside, probe, target);
  return interval;
}

/// Point-prior interval (tau = 0): quadratic closed form, then cut to the
/// open side of the support where point masses are allowed.
inline std::optional<MuInterval> rb_point_positive(const LogEffect& effect, double target) {
  const double z = effect.theta_hat / effect.sigma;
  const double log_bf_max = 0.5 * z * z;
  if (log_bf_max < target) {
    return std::nullopt;
  }
  const double radius =
      std::sqrt(2.0 * effect.sigma * effect.sigma * (log_bf_max - target));
  const double lo = effect.theta_hat - radius;
  const double hi = effect.theta_hat + radius;
  if (hi <= 0.0) {
    return std::nullopt;
  }
  MuInterval interval;
  // log BF at mu = 0 is exactly 0, so the edge is a true root only at
  // target = 0 (gamma = 1); below that the region is clamped by the support.
  interval.low_clamped = lo < 0.0 && target < 0.0;
  interval.mu_low = std::max(lo, 0.0);
  interval.mu_high = hi;
  return interval;
}

}  // namespace detail

/// Interval of prior means with log BF >= ln(gamma) at the given tau, or
/// absent when even the best mu on the support falls short.
inline std::optional<MuInterval> rb_mu_bounds(const LogEffect& effect, double tau, double gamma,
                                              Truncation truncation) {
  effect.validate();
  if (!(tau >= 0.0) || !std::isfinite(tau)) {
    throw domain_error("rb_mu_bounds: tau must be finite and >= 0");
  }
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw domain_error("rb_mu_bounds: gamma must be positive and finite");
  }
  const double target = std::log(gamma);

  if (truncation == Truncation::none) {
    const double s2 = effect.sigma * effect.sigma;
    const double v = s2 + tau * tau;
    const double z = effect.theta_hat / effect.sigma;
    const double log_bf_max = 0.5 * z * z - 0.5 * std::log1p(tau * tau / s2);
    if (log_bf_max < target) {
      return std::nullopt;
    }
    const double radius = std::sqrt(2.0 * v * (log_bf_max - target));
    return MuInterval{effect.theta_hat - radius, effect.theta_hat + radius, false, false};
  }

  if (truncation == Truncation::negative_only) {
    // Mirror image of the positive case: reflect the estimate, solve, and
    // reflect the interval back.
    LogEffect reflected = effect;
    reflected.theta_hat = -effect.theta_hat;
    const auto positive = rb_mu_bounds(reflected, tau, gamma, Truncation::positive_only);
    if (!positive) {
      return std::nullopt;
    }
    return MuInterval{-positive->mu_high, -positive->mu_low, positive->high_clamped,
                      positive->low_clamped};
  }

  return tau == 0.0 ? detail::rb_point_positive(effect, target)
                    : detail::rb_trunc_positive(effect, tau, target);
}

/// Sweep rb_mu_bounds along a tau axis.
inline ReverseBayesRegion rb_region(const LogEffect& effect, const std::vector<double>& tau_axis,
                                    double gamma, Truncation truncation) {
  effect.validate();
  if (tau_axis.empty()) {
    throw config_error("rb_region: tau axis is empty");
  }
  for (std::size_t i = 0; i < tau_axis.size(); ++i) {
    if (!(tau_axis[i] >= 0.0) || !std::isfinite(tau_axis[i])) {
      throw config_error("rb_region: tau axis must be nonnegative and finite");
    }
    if (i > 0 && tau_axis[i] < tau_axis[i - 1]) {
      throw config_error("rb_region: tau axis must be sorted ascending");
    }
  }

  ReverseBayesRegion region;
  region.threshold_gamma = gamma;
  region.tau_axis = tau_axis;
  region.effect = effect;
  region.truncation = truncation;
  region.intervals.reserve(tau_axis.size());
  for (const double tau : tau_axis) {
    auto interval = rb_mu_bounds(effect, tau, gamma, truncation);
    if (interval) {
      region.largest_tau_with_interval = tau;
    }
    region.intervals.push_back(std::move(interval));
  }
  return region;
}

}  // namespace trialbf
