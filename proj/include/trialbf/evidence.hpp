#pragma once

// Qualitative evidence bands for a Bayes factor, on the conventional
// 1/3/10/100 ladder mirrored around BF = 1.

#include <cmath>

#include "trialbf/errors.hpp"

namespace trialbf {

enum class EvidenceCategory {
  decisive_null,
  strong_null,
  moderate_null,
  weak_null,
  none,
  weak_alt,
  moderate_alt,
  strong_alt,
  decisive_alt,
};

inline const char* to_string(EvidenceCategory c) {
  switch (c) {
    case EvidenceCategory::decisive_null: return "decisive_null";
    case EvidenceCategory::strong_null: return "strong_null";
    case EvidenceCategory::moderate_null: return "moderate_null";
    case EvidenceCategory::weak_null: return "weak_null";
    case EvidenceCategory::none: return "none";
    case EvidenceCategory::weak_alt: return "weak_alt";
    case EvidenceCategory::moderate_alt: return "moderate_alt";
    case EvidenceCategory::strong_alt: return "strong_alt";
    default: return "decisive_alt";
  }
}

struct EvidenceLabel {
  double bf = 1.0;
  EvidenceCategory category = EvidenceCategory::none;
};

/// Band thresholds sit at 1/100, 1/10, 1/3, 1, 3, 10, 100. BF = 1 maps to
/// none; every other cutpoint belongs to the band further from 1.
inline EvidenceLabel classify_evidence(double bf) {
  if (!(bf > 0.0)) {
    throw domain_error("classify_evidence: bayes factor must be positive");
  }
  EvidenceCategory category;
  if (bf >= 100.0) {
    category = EvidenceCategory::decisive_alt;
  } else if (bf >= 10.0) {
    category = EvidenceCategory::strong_alt;
  } else if (bf >= 3.0) {
    category = EvidenceCategory::moderate_alt;
  } else if (bf > 1.0) {
    category = EvidenceCategory::weak_alt;
  } else if (bf == 1.0) {
    category = EvidenceCategory::none;
  } else if (bf > 1.0 / 3.0) {
    category = EvidenceCategory::weak_null;
  } else if (bf > 0.1) {
    category = EvidenceCategory::moderate_null;
  } else if (bf > 0.01) {
    category = EvidenceCategory::strong_null;
  } else {
    category = EvidenceCategory::decisive_null;
  }
  return EvidenceLabel{bf, category};
}

/// Same ladder addressed by log BF, for values whose BF over- or underflows.
inline EvidenceLabel classify_evidence_log(double log_bf) {
  if (!std::isfinite(log_bf)) {
    throw domain_error("classify_evidence: log bayes factor must be finite");
  }
  // exp keeps enough resolution here: the cutpoints are far from the
  // over/underflow edges, and +-inf from exp still lands in the outer bands.
  const double bf = std::exp(log_bf);
  if (bf > 0.0 && std::isfinite(bf)) {
    return classify_evidence(bf);
  }
  return EvidenceLabel{bf, log_bf > 0.0 ? EvidenceCategory::decisive_alt
                                        : EvidenceCategory::decisive_null};
}

}  // namespace trialbf
