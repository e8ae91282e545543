#pragma once

// Ingestion of published effect summaries (ratio estimate, CI, p-value)
// and conversion to the canonical log-scale estimate with a recovered
// Wald standard error.

#include <cmath>
#include <optional>
#include <string>

#include "trialbf/errors.hpp"
#include "trialbf/normal.hpp"

namespace trialbf {

enum class Scale { HR, OR, RR };
enum class BenefitDirection { below_one, above_one };
enum class SePreference { prefer_ci, prefer_p };
enum class SeSource { from_ci, from_p, given };
enum class BenefitSign { negative, positive };

inline const char* to_string(Scale s) {
  switch (s) {
    case Scale::HR: return "HR";
    case Scale::OR: return "OR";
    default: return "RR";
  }
}

inline const char* to_string(BenefitDirection d) {
  return d == BenefitDirection::below_one ? "below_one" : "above_one";
}

inline const char* to_string(SeSource s) {
  switch (s) {
    case SeSource::from_ci: return "from_ci";
    case SeSource::from_p: return "from_p";
    default: return "given";
  }
}

struct ConfidenceInterval {
  double lower = 0.0;
  double upper = 0.0;
  double level = 0.95;
};

/// A trial result as published, on the ratio scale.
struct EffectSummary {
  std::string label;
  double estimate = 0.0;
  Scale scale = Scale::HR;
  std::optional<ConfidenceInterval> ci;
  std::optional<double> p_two_sided;
  BenefitDirection benefit_direction = BenefitDirection::below_one;
  std::optional<double> design_effect;  // ratio assumed in the power analysis

  void validate() const {
    if (!(estimate > 0.0) || !std::isfinite(estimate)) {
      throw domain_error("effect '" + label + "': estimate must be a positive ratio");
    }
    if (!ci && !p_two_sided) {
      throw domain_error("effect '" + label +
                         "': unusable summary, needs a confidence interval or a p-value");
    }
    if (ci) {
      if (!(ci->lower > 0.0) || !std::isfinite(ci->upper)) {
        throw domain_error("effect '" + label + "': CI bounds must be positive and finite");
      }
      if (ci->lower == ci->upper) {
        throw domain_error("effect '" + label + "': degenerate CI (lower = upper)");
      }
      if (ci->lower > ci->upper) {
        throw domain_error("effect '" + label + "': CI lower bound exceeds upper bound");
      }
      if (estimate < ci->lower || estimate > ci->upper) {
        throw domain_error("effect '" + label + "': estimate lies outside its CI");
      }
      if (!(ci->level > 0.0) || !(ci->level < 1.0)) {
        throw domain_error("effect '" + label + "': CI level must lie in (0, 1)");
      }
    }
    if (p_two_sided && (!(*p_two_sided > 0.0) || !(*p_two_sided < 1.0))) {
      throw domain_error("effect '" + label + "': p-value must lie in (0, 1)");
    }
    if (design_effect) {
      if (!(*design_effect > 0.0) || !std::isfinite(*design_effect)) {
        throw domain_error("effect '" + label + "': design effect must be a positive ratio");
      }
      const bool benefit_side = benefit_direction == BenefitDirection::below_one
                                    ? *design_effect < 1.0
                                    : *design_effect > 1.0;
      if (!benefit_side) {
        throw domain_error("effect '" + label +
                           "': design effect must lie strictly on the benefit side of 1");
      }
    }
  }
};

/// Canonical internal form: log-scale estimate and its standard error.
struct LogEffect {
  double theta_hat = 0.0;  // natural log of the ratio estimate
  double sigma = 0.0;      // standard error of theta_hat
  SeSource se_source = SeSource::given;
  BenefitSign benefit_sign = BenefitSign::negative;

  void validate() const {
    if (!(sigma > 0.0) || !std::isfinite(sigma) || !std::isfinite(theta_hat)) {
      throw domain_error("log effect: sigma must be positive and finite");
    }
  }
};

/// Wald SE from a ratio-scale CI: (ln upper - ln lower) / (2 z), z the
/// two-sided normal quantile at the interval's level.
inline double se_from_ci(double lower, double upper, double level = 0.95) {
  if (!(lower > 0.0) || !(lower < upper) || !std::isfinite(upper)) {
    throw domain_error("se_from_ci: requires 0 < lower < upper");
  }
  if (!(level > 0.0) || !(level < 1.0)) {
    throw domain_error("se_from_ci: level must lie in (0, 1)");
  }
  const double z = std_normal_quantile(0.5 * (1.0 + level));
  return (std::log(upper) - std::log(lower)) / (2.0 * z);
}

/// Wald SE from a two-sided p-value for the test of log ratio = 0.
inline double se_from_p(double theta_hat, double p_two_sided) {
  if (!(p_two_sided > 0.0) || !(p_two_sided < 1.0)) {
    throw domain_error("se_from_p: p must lie in (0, 1)");
  }
  if (theta_hat == 0.0 || !std::isfinite(theta_hat)) {
    throw domain_error("se_from_p: cannot recover a standard error when the log estimate is 0");
  }
  return std::abs(theta_hat) / std_normal_quantile(1.0 - 0.5 * p_two_sided);
}

/// Convert a published summary to the canonical log-scale form, recovering
/// the SE from the preferred source and falling back to the other one.
inline LogEffect log_transform(const EffectSummary& summary,
                               SePreference preference = SePreference::prefer_ci) {
  summary.validate();
  const double theta_hat = std::log(summary.estimate);

  const bool use_ci = preference == SePreference::prefer_ci ? summary.ci.has_value()
                                                            : !summary.p_two_sided.has_value();
  LogEffect effect;
  effect.theta_hat = theta_hat;
  if (use_ci) {
    effect.sigma = se_from_ci(summary.ci->lower, summary.ci->upper, summary.ci->level);
    effect.se_source = SeSource::from_ci;
  } else {
    effect.sigma = se_from_p(theta_hat, *summary.p_two_sided);
    effect.se_source = SeSource::from_p;
  }
  effect.benefit_sign = summary.benefit_direction == BenefitDirection::below_one
                            ? BenefitSign::negative
                            : BenefitSign::positive;
  effect.validate();
  return effect;
}

}  // namespace trialbf
