#pragma once

// Standard normal density, CDF, log-CDF and quantile.
//
// The CDF is evaluated through erfc so the lower tail keeps full relative
// accuracy down to the underflow limit; below that the log-CDF switches to
// the Mills-ratio asymptotic series. The quantile uses Acklam's rational
// approximation polished by Halley iterations against the erfc-based CDF,
// which brings it to full double precision.

#include <cmath>
#include <limits>

#include "trialbf/errors.hpp"

namespace trialbf {

inline constexpr double ln_two_pi = 1.8378770664093454836;
inline constexpr double sqrt_two_pi = 2.5066282746310005024;
inline constexpr double inv_sqrt_two = 0.70710678118654752440;

/// Log density of N(mean, variance) at x.
inline double normal_log_pdf(double x, double mean, double variance) {
  if (!(variance > 0.0) || !std::isfinite(variance)) {
    throw domain_error("normal_log_pdf: variance must be positive and finite");
  }
  const double d = x - mean;
  return -0.5 * (ln_two_pi + std::log(variance) + d * d / variance);
}

/// Standard normal CDF. Full relative accuracy in the lower tail until
/// the result underflows (z < about -37.7).
inline double std_normal_cdf(double z) {
  return 0.5 * std::erfc(-z * inv_sqrt_two);
}

/// log(Phi(z)), finite for every finite z.
inline double std_normal_log_cdf(double z) {
  if (z > 0.0) {
    // log1p on the upper-tail mass keeps precision where Phi is near 1.
    return std::log1p(-0.5 * std::erfc(z * inv_sqrt_two));
  }
  if (z > -37.0) {
    return std::log(0.5 * std::erfc(-z * inv_sqrt_two));
  }
  // Mills-ratio expansion: Phi(z) = phi(z)/(-z) * (1 - 1/z^2 + 3/z^4 - ...).
  // At z = -37 the truncation error is below 2e-15 relative.
  const double inv = 1.0 / (z * z);
  const double series =
      inv * (-1.0 + inv * (3.0 + inv * (-15.0 + inv * (105.0 - inv * 945.0))));
  return -0.5 * z * z - 0.5 * ln_two_pi - std::log(-z) + std::log1p(series);
}

namespace detail {

// Acklam's inverse-normal rational approximation (relative error < 1.2e-9
// before refinement).
inline double acklam_quantile(double p) {
  static constexpr double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                  -2.759285104469687e+02, 1.383577518672690e+02,
                                  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                  -1.556989798598866e+02, 6.680131188771972e+01,
                                  -1.328068155288572e+01};
  static constexpr double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                  -2.400758277161838e+00, -2.549732539343734e+00,
                                  4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                  2.445134137142996e+00, 3.754408661907416e+00};
  static constexpr double p_low = 0.02425;

  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - p_low) {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

// Phi(x) - p evaluated in the tail that preserves relative accuracy.
// For p > 1/2 the subtraction 1 - p is exact (Sterbenz).
inline double cdf_residual(double x, double p) {
  if (p <= 0.5) {
    return 0.5 * std::erfc(-x * inv_sqrt_two) - p;
  }
  return (1.0 - p) - 0.5 * std::erfc(x * inv_sqrt_two);
}

}  // namespace detail

/// Standard normal quantile, full double precision on (0, 1).
inline double std_normal_quantile(double p) {
  if (!(p > 0.0) || !(p < 1.0)) {
    throw domain_error("std_normal_quantile: p must lie strictly in (0, 1)");
  }
  double x = detail::acklam_quantile(p);
  // Two Halley steps; skipped only where exp(x^2/2) would overflow, which
  // cannot happen for any p representable as a normal double.
  for (int i = 0; i < 2 && std::abs(x) < 37.5; ++i) {
    const double e = detail::cdf_residual(x, p);
    const double u = e * sqrt_two_pi * std::exp(0.5 * x * x);
    x -= u / (1.0 + 0.5 * x * u);
  }
  return x;
}

}  // namespace trialbf
