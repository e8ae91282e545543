#pragma once

// Per-trial evidence reports over a parsed batch: recovered log effect,
// the best-case point-prior BF, and BFs under the design-effect and
// unit-information priors where those inputs exist.

#include <cmath>
#include <optional>
#include <vector>

#include "trialbf/batch.hpp"
#include "trialbf/bayes_factor.hpp"
#include "trialbf/effect.hpp"
#include "trialbf/errors.hpp"
#include "trialbf/evidence.hpp"

namespace trialbf {

struct ReportOptions {
  SePreference se_preference = SePreference::prefer_ci;
  std::optional<double> effective_n;
  // When set, the unit-information prior is truncated to the trial's
  // benefit side instead of spanning both signs.
  bool unit_info_benefit_truncation = false;
};

struct LabeledBf {
  BayesFactorResult result;
  EvidenceCategory category = EvidenceCategory::none;
};

struct TrialReport {
  EffectSummary summary;
  LogEffect effect;
  double z = 0.0;
  // Point prior at the estimate itself: the largest BF any prior can reach.
  double max_log_bf = 0.0;
  double max_bf = 1.0;
  EvidenceCategory max_category = EvidenceCategory::none;
  std::optional<LabeledBf> design_effect_bf;
  std::optional<LabeledBf> unit_information_bf;
};

struct Report {
  ReportOptions options;
  std::vector<TrialReport> trials;
  std::vector<BatchIssue> issues;
};

inline Report build_report(const BatchResult& batch, const ReportOptions& options) {
  if (options.effective_n && (!(*options.effective_n > 0.0) || !std::isfinite(*options.effective_n))) {
    throw domain_error("report: effective_n must be positive and finite");
  }
  Report report;
  report.options = options;
  report.issues = batch.issues;
  for (const auto& row : batch.rows) {
    try {
      TrialReport trial;
      trial.summary = row.summary;
      trial.effect = log_transform(row.summary, options.se_preference);
      trial.z = trial.effect.theta_hat / trial.effect.sigma;

      const auto max = bf_point(trial.effect, trial.effect.theta_hat);
      trial.max_log_bf = max.log_bf;
      trial.max_bf = max.bf;
      trial.max_category = classify_evidence_log(max.log_bf).category;

      if (row.summary.design_effect) {
        const auto result = bf_point(trial.effect, std::log(*row.summary.design_effect));
        trial.design_effect_bf = LabeledBf{result, classify_evidence_log(result.log_bf).category};
      }
      if (options.effective_n) {
        Truncation truncation = Truncation::none;
        if (options.unit_info_benefit_truncation) {
          truncation = row.summary.benefit_direction == BenefitDirection::below_one
                           ? Truncation::negative_only
                           : Truncation::positive_only;
        }
        const auto result = bf_unit_information(trial.effect, *options.effective_n, truncation);
        trial.unit_information_bf =
            LabeledBf{result, classify_evidence_log(result.log_bf).category};
      }
      report.trials.push_back(std::move(trial));
    } catch (const error& e) {
      report.issues.push_back(BatchIssue{row.line, row.summary.label, e.what()});
    }
  }
  return report;
}

}  // namespace trialbf
