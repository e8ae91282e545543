#pragma once

// Batch ingestion of trial summaries from delimited text or JSON. A bad
// header kills the parse; bad rows become per-row diagnostics so one typo
// does not sink a whole file.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "trialbf/effect.hpp"
#include "trialbf/errors.hpp"

namespace trialbf {

struct BatchIssue {
  std::size_t line = 0;  // physical line (CSV) or 1-based entry index (JSON)
  std::string label;
  std::string message;
};

struct BatchRow {
  std::size_t line = 0;
  EffectSummary summary;
};

struct BatchResult {
  std::vector<BatchRow> rows;
  std::vector<BatchIssue> issues;
};

inline Scale parse_scale(std::string text) {
  std::transform(text.begin(), text.end(), text.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (text == "hr") return Scale::HR;
  if (text == "or") return Scale::OR;
  if (text == "rr") return Scale::RR;
  throw domain_error("unknown scale '" + text + "' (expected hr, or, rr)");
}

inline BenefitDirection parse_direction(std::string text) {
  std::transform(text.begin(), text.end(), text.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (text == "below_one" || text == "below-one") return BenefitDirection::below_one;
  if (text == "above_one" || text == "above-one") return BenefitDirection::above_one;
  throw domain_error("unknown direction '" + text + "' (expected below_one or above_one)");
}

namespace detail {

inline std::string trim(const std::string& text) {
  std::size_t begin = 0;
  std::size_t end = text.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(text[begin]))) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
  return text.substr(begin, end - begin);
}

/// One comma-separated record with double-quote escaping ("" inside quotes).
/// Embedded newlines are out of scope for this format.
inline std::vector<std::string> split_csv_record(const std::string& line) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        current.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(current);
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  if (quoted) {
    throw domain_error("unterminated quoted field");
  }
  fields.push_back(current);
  return fields;
}

inline double parse_number(const std::string& cell, const char* field) {
  const std::string text = trim(cell);
  double value = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size()) {
    throw domain_error(std::string(field) + ": '" + text + "' is not a number");
  }
  return value;
}

inline std::optional<double> parse_optional_number(const std::string& cell, const char* field) {
  if (trim(cell).empty()) {
    return std::nullopt;
  }
  return parse_number(cell, field);
}

inline const std::vector<std::string>& batch_columns() {
  static const std::vector<std::string> columns = {
      "label", "estimate", "scale",     "ci_lower",      "ci_upper",
      "ci_level", "p",     "direction", "design_effect"};
  return columns;
}

inline EffectSummary row_from_fields(const std::vector<std::string>& fields) {
  EffectSummary summary;
  summary.label = trim(fields[0]);
  summary.estimate = parse_number(fields[1], "estimate");
  if (const std::string scale = trim(fields[2]); !scale.empty()) {
    summary.scale = parse_scale(scale);
  }
  const auto ci_lower = parse_optional_number(fields[3], "ci_lower");
  const auto ci_upper = parse_optional_number(fields[4], "ci_upper");
  const auto ci_level = parse_optional_number(fields[5], "ci_level");
  if (ci_lower.has_value() != ci_upper.has_value()) {
    throw domain_error("ci_lower and ci_upper must be given together");
  }
  if (ci_lower) {
    summary.ci = ConfidenceInterval{*ci_lower, *ci_upper, ci_level.value_or(0.95)};
  } else if (ci_level) {
    throw domain_error("ci_level given without ci bounds");
  }
  summary.p_two_sided = parse_optional_number(fields[6], "p");
  if (const std::string direction = trim(fields[7]); !direction.empty()) {
    summary.benefit_direction = parse_direction(direction);
  }
  summary.design_effect = parse_optional_number(fields[8], "design_effect");
  summary.validate();
  return summary;
}

}  // namespace trialbf::detail

/// Comma-separated batch with header
/// label,estimate,scale,ci_lower,ci_upper,ci_level,p,direction,design_effect.
/// Empty cells mean absent optional fields.
inline BatchResult parse_batch_csv(std::istream& in) {
  BatchResult result;
  std::string line;
  std::size_t line_number = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (detail::trim(line).empty()) {
      continue;
    }
    if (!header_seen) {
      std::vector<std::string> header;
      try {
        header = detail::split_csv_record(line);
      } catch (const error& e) {
        throw domain_error("batch header: " + std::string(e.what()));
      }
      for (auto& name : header) {
        name = detail::trim(name);
      }
      if (header != detail::batch_columns()) {
        std::string expected;
        for (const auto& name : detail::batch_columns()) {
          expected += expected.empty() ? name : "," + name;
        }
        throw domain_error("batch header mismatch, expected: " + expected);
      }
      header_seen = true;
      continue;
    }
    try {
      const auto fields = detail::split_csv_record(line);
      if (fields.size() != detail::batch_columns().size()) {
        throw domain_error("expected " + std::to_string(detail::batch_columns().size()) +
                           " fields, got " + std::to_string(fields.size()));
      }
      result.rows.push_back(BatchRow{line_number, detail::row_from_fields(fields)});
    } catch (const error& e) {
      const auto comma = line.find(',');
      const std::string label = detail::trim(line.substr(0, comma));
      result.issues.push_back(BatchIssue{line_number, label, e.what()});
    }
  }
  if (!header_seen) {
    throw domain_error("batch file has no header row");
  }
  return result;
}

/// JSON batch: an array of trial objects (or an object with a "trials"
/// array) carrying the same field names as the delimited format.
inline BatchResult parse_batch_json(std::istream& in) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw domain_error(std::string("batch JSON: ") + e.what());
  }
  if (doc.is_object() && doc.contains("trials")) {
    doc = doc["trials"];
  }
  if (!doc.is_array()) {
    throw domain_error("batch JSON: expected an array of trials");
  }

  const auto number_field = [](const nlohmann::json& obj, const char* key) -> std::optional<double> {
    if (!obj.contains(key) || obj[key].is_null()) {
      return std::nullopt;
    }
    if (!obj[key].is_number()) {
      throw domain_error(std::string(key) + ": expected a number");
    }
    return obj[key].get<double>();
  };
  const auto string_field = [](const nlohmann::json& obj, const char* key) -> std::optional<std::string> {
    if (!obj.contains(key) || obj[key].is_null()) {
      return std::nullopt;
    }
    if (!obj[key].is_string()) {
      throw domain_error(std::string(key) + ": expected a string");
    }
    return obj[key].get<std::string>();
  };

  BatchResult result;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const auto& entry = doc[i];
    std::string label;
    try {
      if (!entry.is_object()) {
        throw domain_error("entry is not an object");
      }
      EffectSummary summary;
      summary.label = string_field(entry, "label").value_or("");
      label = summary.label;
      const auto estimate = number_field(entry, "estimate");
      if (!estimate) {
        throw domain_error("estimate: required");
      }
      summary.estimate = *estimate;
      if (const auto scale = string_field(entry, "scale")) {
        summary.scale = parse_scale(*scale);
      }
      const auto ci_lower = number_field(entry, "ci_lower");
      const auto ci_upper = number_field(entry, "ci_upper");
      if (ci_lower.has_value() != ci_upper.has_value()) {
        throw domain_error("ci_lower and ci_upper must be given together");
      }
      if (ci_lower) {
        summary.ci = ConfidenceInterval{*ci_lower, *ci_upper,
                                        number_field(entry, "ci_level").value_or(0.95)};
      }
      summary.p_two_sided = number_field(entry, "p");
      if (const auto direction = string_field(entry, "direction")) {
        summary.benefit_direction = parse_direction(*direction);
      }
      summary.design_effect = number_field(entry, "design_effect");
      summary.validate();
      result.rows.push_back(BatchRow{i + 1, std::move(summary)});
    } catch (const error& e) {
      result.issues.push_back(BatchIssue{i + 1, label, e.what()});
    }
  }
  return result;
}

/// Open a batch file and parse by extension: .json is JSON, anything else
/// is the delimited format.
inline BatchResult load_batch(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw io_error("cannot open batch file: " + path.string());
  }
  std::string extension = path.extension().string();
  std::transform(extension.begin(), extension.end(), extension.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return extension == ".json" ? parse_batch_json(in) : parse_batch_csv(in);
}

}  // namespace trialbf
