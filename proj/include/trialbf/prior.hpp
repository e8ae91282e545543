#pragma once

// Prior distributions on the log-scale effect.

#include <cmath>
#include <string>

#include "trialbf/errors.hpp"

namespace trialbf {

enum class Truncation { none, positive_only, negative_only };

inline const char* to_string(Truncation t) {
  switch (t) {
    case Truncation::none: return "none";
    case Truncation::positive_only: return "positive_only";
    default: return "negative_only";
  }
}

/// Normal prior on the log effect, optionally truncated to one sign.
/// tau = 0 degenerates to a point mass at mu.
struct PriorSpec {
  double mu = 0.0;
  double tau = 0.0;
  Truncation truncation = Truncation::none;

  /// Closed truncation support: {x >= 0} for positive_only, {x <= 0} for
  /// negative_only. Used for clamping continuous quantities.
  static bool in_support(double x, Truncation truncation) {
    switch (truncation) {
      case Truncation::positive_only: return x >= 0.0;
      case Truncation::negative_only: return x <= 0.0;
      default: return true;
    }
  }

  /// Point masses need the open side: a mass at 0 coincides with the null
  /// hypothesis and is rejected rather than given a BF by convention.
  static bool point_mass_allowed(double mu, Truncation truncation) {
    switch (truncation) {
      case Truncation::positive_only: return mu > 0.0;
      case Truncation::negative_only: return mu < 0.0;
      default: return true;
    }
  }

  bool point() const { return tau == 0.0; }

  void validate() const {
    if (!std::isfinite(mu)) {
      throw domain_error("prior: mu must be finite");
    }
    if (!(tau >= 0.0) || !std::isfinite(tau)) {
      throw domain_error("prior: tau must be finite and >= 0");
    }
    if (point() && !point_mass_allowed(mu, truncation)) {
      throw domain_error("prior: unsupported point mass at mu = " + std::to_string(mu) +
                         " under " + std::string(to_string(truncation)) + " truncation");
    }
  }
};

}  // namespace trialbf
