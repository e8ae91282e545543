#pragma once

// Renderers for machine output (CSV, JSON) and human tables. Machine formats
// carry full-precision numbers; tables round to 3 significant digits.
// Rounded values never feed back into computation.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "trialbf/batch.hpp"
#include "trialbf/bayes_factor.hpp"
#include "trialbf/effect.hpp"
#include "trialbf/evidence.hpp"
#include "trialbf/report.hpp"
#include "trialbf/reverse_bayes.hpp"
#include "trialbf/sensitivity.hpp"

namespace trialbf {

using json = nlohmann::ordered_json;

/// Full precision: 17 significant digits round-trip any double exactly.
inline std::string fmt_full(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

/// Human-table precision.
inline std::string fmt_sig(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.3g", value);
  return buffer;
}

namespace detail {

inline json effect_to_json(const LogEffect& effect) {
  json doc;
  doc["theta_hat"] = effect.theta_hat;
  doc["sigma"] = effect.sigma;
  doc["se_source"] = to_string(effect.se_source);
  doc["benefit_sign"] = effect.benefit_sign == BenefitSign::negative ? "negative" : "positive";
  return doc;
}

inline json summary_to_json(const EffectSummary& summary) {
  json doc;
  doc["label"] = summary.label;
  doc["estimate"] = summary.estimate;
  doc["scale"] = to_string(summary.scale);
  doc["direction"] = to_string(summary.benefit_direction);
  if (summary.ci) {
    doc["ci"] = json{{"lower", summary.ci->lower},
                     {"upper", summary.ci->upper},
                     {"level", summary.ci->level}};
  } else {
    doc["ci"] = nullptr;
  }
  doc["p"] = summary.p_two_sided ? json(*summary.p_two_sided) : json(nullptr);
  doc["design_effect"] = summary.design_effect ? json(*summary.design_effect) : json(nullptr);
  return doc;
}

inline json issues_to_json(const std::vector<BatchIssue>& issues) {
  json list = json::array();
  for (const auto& issue : issues) {
    list.push_back(json{{"line", issue.line}, {"label", issue.label}, {"message", issue.message}});
  }
  return list;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// single Bayes factor

inline json bf_to_json(const BayesFactorResult& result, EvidenceCategory category,
                       const EffectSummary& summary) {
  json doc;
  doc["schema_version"] = 1;
  doc["kind"] = "bayes_factor";
  doc["input"] = detail::summary_to_json(summary);
  doc["effect"] = detail::effect_to_json(result.effect);
  doc["prior"] = json{{"mu", result.prior.mu},
                      {"mu_ratio", std::exp(result.prior.mu)},
                      {"tau", result.prior.tau},
                      {"truncation", to_string(result.prior.truncation)}};
  doc["bf_kind"] = to_string(result.kind);
  doc["log_bf"] = result.log_bf;
  doc["bf"] = result.bf;
  doc["category"] = to_string(category);
  return doc;
}

inline std::string bf_to_csv(const BayesFactorResult& result, EvidenceCategory category,
                             const EffectSummary& summary) {
  std::string out = "label,bf_kind,mu,tau,truncation,theta_hat,sigma,se_source,log_bf,bf,category\n";
  out += summary.label + ',' + to_string(result.kind) + ',' + fmt_full(result.prior.mu) + ',' +
         fmt_full(result.prior.tau) + ',' + to_string(result.prior.truncation) + ',' +
         fmt_full(result.effect.theta_hat) + ',' + fmt_full(result.effect.sigma) + ',' +
         to_string(result.effect.se_source) + ',' + fmt_full(result.log_bf) + ',' +
         fmt_full(result.bf) + ',' + to_string(category) + '\n';
  return out;
}

inline std::string bf_to_table(const BayesFactorResult& result, EvidenceCategory category,
                               const EffectSummary& summary) {
  std::string out;
  out += "label: " + summary.label + "\n";
  out += std::string("effect: ") + to_string(summary.scale) + " = " + fmt_sig(summary.estimate) +
         ", theta_hat = " + fmt_sig(result.effect.theta_hat) +
         ", sigma = " + fmt_sig(result.effect.sigma) + " (se " +
         to_string(result.effect.se_source) + ")\n";
  out += "prior: mu = " + fmt_sig(result.prior.mu) + " (ratio " +
         fmt_sig(std::exp(result.prior.mu)) + "), tau = " + fmt_sig(result.prior.tau) +
         ", truncation = " + to_string(result.prior.truncation) + "\n";
  out += "log BF = " + fmt_sig(result.log_bf) + ", BF = " + fmt_sig(result.bf) + "\n";
  out += std::string("evidence: ") + to_string(category) + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// sensitivity grid

inline std::string grid_to_csv(const SensitivityGrid& grid) {
  const auto clipped = grid_clip(grid);
  std::string out = "mu,tau,log_bf,bf_clipped\n";
  for (std::size_t i = 0; i < grid.tau_axis.size(); ++i) {
    for (std::size_t j = 0; j < grid.mu_axis.size(); ++j) {
      const double log_bf = grid.at(i, j);
      out += fmt_full(grid.mu_axis[j]) + ',' + fmt_full(grid.tau_axis[i]) + ',';
      if (!std::isnan(log_bf)) {
        out += fmt_full(log_bf) + ',' + fmt_full(clipped[i * grid.spec.n_mu + j]);
      } else {
        out += ',';
      }
      out += '\n';
    }
  }
  return out;
}

inline json grid_to_json(const SensitivityGrid& grid) {
  const auto clipped = grid_clip(grid);
  json doc;
  doc["schema_version"] = 1;
  doc["kind"] = "sensitivity_grid";
  doc["effect"] = detail::effect_to_json(grid.effect);
  doc["truncation"] = to_string(grid.spec.truncation);
  doc["clip_floor"] = grid.spec.clip_floor;
  json mu_axis = json::array();
  json mu_axis_ratio = json::array();
  for (const double mu : grid.mu_axis) {
    mu_axis.push_back(mu);
    mu_axis_ratio.push_back(std::exp(mu));
  }
  doc["mu_axis"] = std::move(mu_axis);
  doc["mu_axis_ratio"] = std::move(mu_axis_ratio);
  doc["tau_axis"] = grid.tau_axis;
  json log_bf_rows = json::array();
  json clipped_rows = json::array();
  for (std::size_t i = 0; i < grid.tau_axis.size(); ++i) {
    json log_row = json::array();
    json clip_row = json::array();
    for (std::size_t j = 0; j < grid.mu_axis.size(); ++j) {
      // absent cells become explicit nulls, not NaN numbers
      const double value = grid.at(i, j);
      log_row.push_back(std::isnan(value) ? json(nullptr) : json(value));
      const double clip = clipped[i * grid.spec.n_mu + j];
      clip_row.push_back(std::isnan(clip) ? json(nullptr) : json(clip));
    }
    log_bf_rows.push_back(std::move(log_row));
    clipped_rows.push_back(std::move(clip_row));
  }
  doc["log_bf"] = std::move(log_bf_rows);
  doc["bf_clipped"] = std::move(clipped_rows);
  doc["max_cell"] = json{{"mu", grid.max_cell.mu},
                         {"mu_ratio", std::exp(grid.max_cell.mu)},
                         {"tau", grid.max_cell.tau},
                         {"log_bf", grid.max_cell.log_bf},
                         {"bf", std::exp(grid.max_cell.log_bf)}};
  return doc;
}

inline std::string grid_to_table(const SensitivityGrid& grid) {
  std::string out;
  out += "sensitivity grid: " + std::to_string(grid.spec.n_tau) + " tau x " +
         std::to_string(grid.spec.n_mu) + " mu, truncation " + to_string(grid.spec.truncation) +
         "\n";
  out += "mu in [" + fmt_sig(grid.spec.mu_min) + ", " + fmt_sig(grid.spec.mu_max) + "] (ratio " +
         fmt_sig(std::exp(grid.spec.mu_min)) + " to " + fmt_sig(std::exp(grid.spec.mu_max)) +
         "), tau in [" + fmt_sig(grid.spec.tau_min) + ", " + fmt_sig(grid.spec.tau_max) + "]\n";
  out += "max BF = " + fmt_sig(std::exp(grid.max_cell.log_bf)) + " (log " +
         fmt_sig(grid.max_cell.log_bf) + ") at mu = " + fmt_sig(grid.max_cell.mu) + " (ratio " +
         fmt_sig(std::exp(grid.max_cell.mu)) + "), tau = " + fmt_sig(grid.max_cell.tau) + "\n";
  out += "clip floor: " + fmt_sig(grid.spec.clip_floor) + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// reverse-Bayes region

inline std::string region_to_csv(const ReverseBayesRegion& region) {
  std::string out = "tau,mu_low,mu_high,present\n";
  for (std::size_t i = 0; i < region.tau_axis.size(); ++i) {
    const auto& interval = region.intervals[i];
    out += fmt_full(region.tau_axis[i]) + ',';
    if (interval) {
      out += fmt_full(interval->mu_low) + ',' + fmt_full(interval->mu_high) + ",true\n";
    } else {
      out += ",,false\n";
    }
  }
  return out;
}

inline json region_to_json(const ReverseBayesRegion& region) {
  json doc;
  doc["schema_version"] = 1;
  doc["kind"] = "reverse_bayes_region";
  doc["gamma"] = region.threshold_gamma;
  doc["truncation"] = to_string(region.truncation);
  doc["effect"] = detail::effect_to_json(region.effect);
  doc["largest_tau_with_interval"] = region.largest_tau_with_interval
                                         ? json(*region.largest_tau_with_interval)
                                         : json(nullptr);
  json intervals = json::array();
  for (std::size_t i = 0; i < region.tau_axis.size(); ++i) {
    json row;
    row["tau"] = region.tau_axis[i];
    const auto& interval = region.intervals[i];
    row["present"] = interval.has_value();
    if (interval) {
      row["mu_low"] = interval->mu_low;
      row["mu_high"] = interval->mu_high;
      row["mu_low_ratio"] = std::exp(interval->mu_low);
      row["mu_high_ratio"] = std::exp(interval->mu_high);
      row["low_clamped"] = interval->low_clamped;
      row["high_clamped"] = interval->high_clamped;
    }
    intervals.push_back(std::move(row));
  }
  doc["intervals"] = std::move(intervals);
  return doc;
}

/// One-line reading of the region: how far in tau it reaches and how wide
/// the mu interval is at the smallest tau that has one.
inline std::string region_verdict(const ReverseBayesRegion& region) {
  std::string out = "verdict: ";
  const auto first = std::find_if(region.intervals.begin(), region.intervals.end(),
                                  [](const auto& iv) { return iv.has_value(); });
  if (first == region.intervals.end()) {
    out += "no prior on the support reaches BF >= " + fmt_sig(region.threshold_gamma) + "\n";
    return out;
  }
  const std::size_t index = static_cast<std::size_t>(first - region.intervals.begin());
  const MuInterval& interval = **first;
  const double width = interval.mu_high - interval.mu_low;
  out += "BF >= " + fmt_sig(region.threshold_gamma) + " priors reach tau = " +
         fmt_sig(*region.largest_tau_with_interval) + "; at tau = " +
         fmt_sig(region.tau_axis[index]) + " the mu interval spans ratio " +
         fmt_sig(std::exp(interval.mu_low)) + " to " + fmt_sig(std::exp(interval.mu_high)) +
         " (log-width " + fmt_sig(width) + ")\n";
  return out;
}

inline std::string region_to_table(const ReverseBayesRegion& region) {
  std::string out;
  out += "reverse-Bayes region: gamma = " + fmt_sig(region.threshold_gamma) + ", truncation " +
         to_string(region.truncation) + "\n";
  out += "tau\tmu_low\tmu_high\tratio_low\tratio_high\n";
  for (std::size_t i = 0; i < region.tau_axis.size(); ++i) {
    const auto& interval = region.intervals[i];
    out += fmt_sig(region.tau_axis[i]);
    if (interval) {
      out += std::string("\t") + fmt_sig(interval->mu_low) + '\t' + fmt_sig(interval->mu_high) +
             '\t' + fmt_sig(std::exp(interval->mu_low)) + '\t' +
             fmt_sig(std::exp(interval->mu_high)) + '\n';
    } else {
      out += "\t-\t-\t-\t-\n";
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// batch report

inline json report_to_json(const Report& report) {
  json doc;
  doc["schema_version"] = 1;
  doc["kind"] = "report";
  doc["se_preference"] =
      report.options.se_preference == SePreference::prefer_ci ? "prefer_ci" : "prefer_p";
  doc["effective_n"] =
      report.options.effective_n ? json(*report.options.effective_n) : json(nullptr);
  doc["unit_info_truncation"] =
      report.options.unit_info_benefit_truncation ? "benefit_side" : "none";
  json trials = json::array();
  for (const auto& trial : report.trials) {
    json row = detail::summary_to_json(trial.summary);
    row["theta_hat"] = trial.effect.theta_hat;
    row["sigma"] = trial.effect.sigma;
    row["se_source"] = to_string(trial.effect.se_source);
    row["z"] = trial.z;
    row["max_bf"] = json{{"mu", trial.effect.theta_hat},
                         {"ratio", std::exp(trial.effect.theta_hat)},
                         {"log_bf", trial.max_log_bf},
                         {"bf", trial.max_bf},
                         {"category", to_string(trial.max_category)}};
    if (trial.design_effect_bf) {
      const auto& labeled = *trial.design_effect_bf;
      row["design_effect_bf"] = json{{"mu", labeled.result.prior.mu},
                                     {"ratio", std::exp(labeled.result.prior.mu)},
                                     {"log_bf", labeled.result.log_bf},
                                     {"bf", labeled.result.bf},
                                     {"category", to_string(labeled.category)}};
    } else {
      row["design_effect_bf"] = nullptr;
    }
    if (trial.unit_information_bf) {
      const auto& labeled = *trial.unit_information_bf;
      row["unit_information_bf"] = json{{"tau", labeled.result.prior.tau},
                                        {"truncation", to_string(labeled.result.prior.truncation)},
                                        {"log_bf", labeled.result.log_bf},
                                        {"bf", labeled.result.bf},
                                        {"category", to_string(labeled.category)}};
    } else {
      row["unit_information_bf"] = nullptr;
    }
    trials.push_back(std::move(row));
  }
  doc["trials"] = std::move(trials);
  doc["issues"] = detail::issues_to_json(report.issues);
  return doc;
}

inline std::string report_to_csv(const Report& report) {
  std::string out =
      "label,estimate,scale,direction,p,theta_hat,sigma,se_source,z,"
      "max_log_bf,max_bf,max_category,design_effect,design_log_bf,design_bf,design_category,"
      "ui_log_bf,ui_bf,ui_category\n";
  for (const auto& trial : report.trials) {
    out += trial.summary.label + ',' + fmt_full(trial.summary.estimate) + ',' +
           to_string(trial.summary.scale) + ',' + to_string(trial.summary.benefit_direction) + ',';
    out += trial.summary.p_two_sided ? fmt_full(*trial.summary.p_two_sided) : "";
    out += ',' + fmt_full(trial.effect.theta_hat) + ',' + fmt_full(trial.effect.sigma) + ',' +
           to_string(trial.effect.se_source) + ',' + fmt_full(trial.z) + ',' +
           fmt_full(trial.max_log_bf) + ',' + fmt_full(trial.max_bf) + ',' +
           to_string(trial.max_category) + ',';
    if (trial.design_effect_bf) {
      out += fmt_full(*trial.summary.design_effect) + ',' +
             fmt_full(trial.design_effect_bf->result.log_bf) + ',' +
             fmt_full(trial.design_effect_bf->result.bf) + ',' +
             to_string(trial.design_effect_bf->category);
    } else {
      out += ",,,";
    }
    out += ',';
    if (trial.unit_information_bf) {
      out += fmt_full(trial.unit_information_bf->result.log_bf) + ',' +
             fmt_full(trial.unit_information_bf->result.bf) + ',' +
             to_string(trial.unit_information_bf->category);
    } else {
      out += ",,";
    }
    out += '\n';
  }
  return out;
}

inline std::string report_to_table(const Report& report) {
  std::string out;
  for (const auto& trial : report.trials) {
    out += "trial " + trial.summary.label + ": " + to_string(trial.summary.scale) + " = " +
           fmt_sig(trial.summary.estimate);
    if (trial.summary.p_two_sided) {
      out += ", p = " + fmt_sig(*trial.summary.p_two_sided);
    }
    out += std::string(", benefit ") +
           (trial.summary.benefit_direction == BenefitDirection::below_one ? "below" : "above") +
           " 1\n";
    out += "  theta_hat = " + fmt_sig(trial.effect.theta_hat) +
           ", sigma = " + fmt_sig(trial.effect.sigma) + " (se " +
           to_string(trial.effect.se_source) + "), z = " + fmt_sig(trial.z) + "\n";
    out += "  max point-prior BF = " + fmt_sig(trial.max_bf) + " (" +
           to_string(trial.max_category) + ") at ratio " +
           fmt_sig(std::exp(trial.effect.theta_hat)) + "\n";
    if (trial.design_effect_bf) {
      out += "  design-effect prior (ratio " + fmt_sig(*trial.summary.design_effect) +
             "): log BF = " + fmt_sig(trial.design_effect_bf->result.log_bf) + ", BF = " +
             fmt_sig(trial.design_effect_bf->result.bf) + " (" +
             to_string(trial.design_effect_bf->category) + ")\n";
    }
    if (trial.unit_information_bf) {
      out += "  unit-information prior (n = " + fmt_sig(*report.options.effective_n) +
             ", truncation " + to_string(trial.unit_information_bf->result.prior.truncation) +
             "): BF = " + fmt_sig(trial.unit_information_bf->result.bf) + " (" +
             to_string(trial.unit_information_bf->category) + ")\n";
    }
  }
  if (report.issues.empty()) {
    out += "issues: none\n";
  } else {
    out += "issues:\n";
    for (const auto& issue : report.issues) {
      out += "  line " + std::to_string(issue.line) +
             (issue.label.empty() ? "" : " (" + issue.label + ")") + ": " + issue.message + "\n";
    }
  }
  return out;
}

}  // namespace trialbf
