// trialbf: Bayes factor evidence analysis from published trial summaries.
//
// Subcommands:
//   bf       one Bayes factor for an explicit prior
//   grid     (mu, tau) sensitivity grid, optionally as an SVG heatmap
//   reverse  per-tau intervals of mu with BF >= gamma
//   report   batch file -> per-trial evidence document
//
// Exit codes: 0 success, 1 usage/config error, 2 data error, 3 I/O error.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <trialbf/trialbf.hpp>

namespace {

using namespace trialbf;

struct EffectFlags {
  std::string label = "effect";
  double estimate = 0.0;
  std::string scale = "hr";
  std::string ci_text;
  double ci_level = 0.95;
  double p = 0.0;
  std::string direction = "below-one";
  double design_effect = 0.0;
  CLI::App* cmd = nullptr;
};

void add_effect_flags(CLI::App* cmd, EffectFlags& flags) {
  flags.cmd = cmd;
  cmd->add_option("--label", flags.label, "name used in output");
  cmd->add_option("--estimate", flags.estimate, "ratio-scale effect estimate")->required();
  cmd->add_option("--scale", flags.scale, "effect measure")
      ->check(CLI::IsMember({"hr", "or", "rr"}))
      ->capture_default_str();
  cmd->add_option("--ci", flags.ci_text, "confidence interval as lower,upper");
  cmd->add_option("--ci-level", flags.ci_level, "confidence level")->capture_default_str();
  cmd->add_option("--p", flags.p, "two-sided p-value");
  cmd->add_option("--direction", flags.direction, "side of 1 that means benefit")
      ->check(CLI::IsMember({"below-one", "above-one", "below_one", "above_one"}))
      ->capture_default_str();
  cmd->add_option("--design-effect", flags.design_effect,
                  "ratio assumed in the trial's power analysis");
}

double parse_flag_number(const std::string& text, const char* flag) {
  double value = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size()) {
    throw config_error(std::string(flag) + ": '" + text + "' is not a number");
  }
  return value;
}

EffectSummary summary_from_flags(const EffectFlags& flags) {
  EffectSummary summary;
  summary.label = flags.label;
  summary.estimate = flags.estimate;
  summary.scale = parse_scale(flags.scale);
  summary.benefit_direction = parse_direction(flags.direction);
  if (flags.cmd->count("--ci") > 0) {
    const auto comma = flags.ci_text.find(',');
    if (comma == std::string::npos) {
      throw config_error("--ci expects lower,upper");
    }
    summary.ci = ConfidenceInterval{parse_flag_number(flags.ci_text.substr(0, comma), "--ci"),
                                    parse_flag_number(flags.ci_text.substr(comma + 1), "--ci"),
                                    flags.ci_level};
  } else if (flags.cmd->count("--ci-level") > 0) {
    throw config_error("--ci-level given without --ci");
  }
  if (flags.cmd->count("--p") > 0) {
    summary.p_two_sided = flags.p;
  }
  if (flags.cmd->count("--design-effect") > 0) {
    summary.design_effect = flags.design_effect;
  }
  summary.validate();
  return summary;
}

Truncation parse_truncation(const std::string& text, BenefitDirection direction) {
  if (text == "none") return Truncation::none;
  if (text == "below-one" || text == "below_one") return Truncation::negative_only;
  if (text == "above-one" || text == "above_one") return Truncation::positive_only;
  // auto: truncate onto the benefit side
  return direction == BenefitDirection::below_one ? Truncation::negative_only
                                                  : Truncation::positive_only;
}

void write_output(const std::string& content, const std::string& out_path) {
  if (out_path.empty()) {
    std::fwrite(content.data(), 1, content.size(), stdout);
    return;
  }
  const std::filesystem::path target(out_path);
  const std::filesystem::path temp(out_path + ".tmp");
  {
    std::ofstream stream(temp, std::ios::binary | std::ios::trunc);
    if (!stream) {
      throw io_error("cannot open output file: " + temp.string());
    }
    stream.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!stream) {
      throw io_error("cannot write output file: " + temp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(temp, target, ec);
  if (ec) {
    throw io_error("cannot move output into place: " + target.string() + " (" + ec.message() +
                   ")");
  }
}

std::string dump_json(const json& doc) { return doc.dump(2) + "\n"; }

struct GlobalFlags {
  std::string se_from = "ci";
  std::string out;
  std::string format = "table";
  SePreference preference() const {
    return se_from == "p" ? SePreference::prefer_p : SePreference::prefer_ci;
  }
};

void require_format(const GlobalFlags& global, std::initializer_list<const char*> allowed) {
  for (const char* name : allowed) {
    if (global.format == name) {
      return;
    }
  }
  throw config_error("format '" + global.format + "' is not supported by this subcommand");
}

int run_bf(const GlobalFlags& global, const EffectFlags& effect_flags, const CLI::App* cmd,
           double mean_ratio, double mean_log, double sd, const std::string& truncate,
           double unit_info_n) {
  require_format(global, {"table", "csv", "json"});
  const EffectSummary summary = summary_from_flags(effect_flags);
  const LogEffect effect = log_transform(summary, global.preference());
  const Truncation truncation = parse_truncation(truncate, summary.benefit_direction);

  BayesFactorResult result;
  if (cmd->count("--unit-info-n") > 0) {
    result = bf_unit_information(effect, unit_info_n, truncation);
  } else {
    PriorSpec prior;
    prior.mu = cmd->count("--prior-mean-ratio") > 0 ? std::log(mean_ratio) : mean_log;
    if (!std::isfinite(prior.mu)) {
      throw domain_error("--prior-mean-ratio must be a positive ratio");
    }
    prior.tau = sd;
    prior.truncation = truncation;
    result = truncation == Truncation::none ? bf_normal(effect, prior) : bf_trunc(effect, prior);
  }
  const EvidenceCategory category = classify_evidence_log(result.log_bf).category;

  if (global.format == "json") {
    write_output(dump_json(bf_to_json(result, category, summary)), global.out);
  } else if (global.format == "csv") {
    write_output(bf_to_csv(result, category, summary), global.out);
  } else {
    write_output(bf_to_table(result, category, summary), global.out);
  }
  return 0;
}

int run_grid(const GlobalFlags& global, const EffectFlags& effect_flags, const CLI::App* cmd,
             double mu_min_ratio, double mu_max_ratio, double tau_min, double tau_max,
             std::size_t n_mu, std::size_t n_tau, double clip_floor, const std::string& truncate,
             unsigned threads, std::string title) {
  const EffectSummary summary = summary_from_flags(effect_flags);
  const LogEffect effect = log_transform(summary, global.preference());

  if (cmd->count("--mu-min-ratio") == 0) {
    mu_min_ratio = summary.benefit_direction == BenefitDirection::below_one ? 0.5 : 1.0;
  }
  if (cmd->count("--mu-max-ratio") == 0) {
    mu_max_ratio = summary.benefit_direction == BenefitDirection::below_one ? 1.0 : 3.0;
  }
  if (!(mu_min_ratio > 0.0) || !(mu_max_ratio > 0.0)) {
    throw config_error("--mu-min-ratio and --mu-max-ratio must be positive ratios");
  }

  GridSpec spec;
  spec.mu_min = std::log(mu_min_ratio);
  spec.mu_max = std::log(mu_max_ratio);
  spec.tau_min = tau_min;
  spec.tau_max = tau_max;
  spec.n_mu = n_mu;
  spec.n_tau = n_tau;
  spec.clip_floor = clip_floor;
  spec.truncation = parse_truncation(truncate, summary.benefit_direction);

  const SensitivityGrid grid = grid_eval(effect, spec, threads);

  if (global.format == "svg") {
    SvgOptions options;
    options.title = title.empty() ? summary.label : std::move(title);
    options.design_effect = summary.design_effect;
    write_output(svg_heatmap(grid, options), global.out);
  } else if (global.format == "json") {
    write_output(dump_json(grid_to_json(grid)), global.out);
  } else if (global.format == "csv") {
    write_output(grid_to_csv(grid), global.out);
  } else {
    write_output(grid_to_table(grid), global.out);
  }
  return 0;
}

int run_reverse(const GlobalFlags& global, const EffectFlags& effect_flags, double gamma,
                double tau_min, double tau_max, std::size_t n_tau, const std::string& truncate) {
  require_format(global, {"table", "csv", "json"});
  const EffectSummary summary = summary_from_flags(effect_flags);
  const LogEffect effect = log_transform(summary, global.preference());
  if (!(tau_min >= 0.0) || !(tau_min <= tau_max) || n_tau < 1) {
    throw config_error("reverse: requires 0 <= tau-min <= tau-max and n-tau >= 1");
  }
  const std::vector<double> tau_axis =
      n_tau == 1 ? std::vector<double>{tau_min} : linspace(tau_min, tau_max, n_tau);
  const ReverseBayesRegion region =
      rb_region(effect, tau_axis, gamma, parse_truncation(truncate, summary.benefit_direction));

  std::string payload;
  if (global.format == "json") {
    payload = dump_json(region_to_json(region));
  } else if (global.format == "csv") {
    payload = region_to_csv(region);
  } else {
    payload = region_to_table(region);
  }
  const std::string verdict = region_verdict(region);

  write_output(payload, global.out);
  if (!global.out.empty() || global.format == "table") {
    std::fputs(verdict.c_str(), stdout);
  } else {
    std::fputs(verdict.c_str(), stderr);
  }
  return 0;
}

int run_report(const GlobalFlags& global, const std::string& input, const CLI::App* cmd,
               double effective_n, const std::string& ui_truncate) {
  require_format(global, {"table", "csv", "json"});
  const BatchResult batch = load_batch(input);
  ReportOptions options;
  options.se_preference = global.preference();
  if (cmd->count("--effective-n") > 0) {
    options.effective_n = effective_n;
  }
  options.unit_info_benefit_truncation = ui_truncate == "benefit";
  const Report report = build_report(batch, options);

  if (global.format == "json") {
    write_output(dump_json(report_to_json(report)), global.out);
  } else if (global.format == "csv") {
    write_output(report_to_csv(report), global.out);
  } else {
    write_output(report_to_table(report), global.out);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayes factor evidence analysis from published trial summary statistics"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key-value config file; command-line flags win");

  GlobalFlags global;
  app.add_option("--se-from", global.se_from, "preferred standard-error source")
      ->check(CLI::IsMember({"ci", "p"}))
      ->capture_default_str();
  app.add_option("--out", global.out, "output file (default: stdout)");
  app.add_option("--format", global.format, "output format")
      ->check(CLI::IsMember({"table", "csv", "json", "svg"}))
      ->capture_default_str();

  // bf
  auto* bf_cmd = app.add_subcommand("bf", "Bayes factor for one prior");
  bf_cmd->fallthrough();
  EffectFlags bf_effect;
  add_effect_flags(bf_cmd, bf_effect);
  double mean_ratio = 1.0;
  double mean_log = 0.0;
  double sd = 0.0;
  std::string bf_truncate = "none";
  double unit_info_n = 0.0;
  auto* opt_mean_ratio = bf_cmd->add_option("--prior-mean-ratio", mean_ratio,
                                            "prior mean as a ratio (converted to log scale)");
  auto* opt_mean_log = bf_cmd->add_option("--prior-mean-log", mean_log, "prior mean on log scale");
  auto* opt_sd = bf_cmd->add_option("--prior-sd", sd, "prior sd on log scale (0 = point mass)");
  bf_cmd->add_option("--truncate", bf_truncate, "restrict the prior to one side of 1")
      ->check(CLI::IsMember({"none", "below-one", "above-one", "below_one", "above_one"}))
      ->capture_default_str();
  auto* opt_ui = bf_cmd->add_option("--unit-info-n", unit_info_n,
                                    "unit-information prior with this effective sample size");
  opt_mean_ratio->excludes(opt_mean_log);
  opt_ui->excludes(opt_mean_ratio);
  opt_ui->excludes(opt_mean_log);
  opt_ui->excludes(opt_sd);

  // grid
  auto* grid_cmd = app.add_subcommand("grid", "(mu, tau) sensitivity grid");
  grid_cmd->fallthrough();
  EffectFlags grid_effect;
  add_effect_flags(grid_cmd, grid_effect);
  double mu_min_ratio = 0.0;
  double mu_max_ratio = 0.0;
  double grid_tau_min = 0.0;
  double grid_tau_max = 1.0;
  std::size_t n_mu = 201;
  std::size_t n_tau = 201;
  double clip_floor = 0.01;
  std::string grid_truncate = "auto";
  unsigned threads = 0;
  std::string title;
  grid_cmd->add_option("--mu-min-ratio", mu_min_ratio,
                       "smallest prior mean, ratio scale (default: benefit side of 1)");
  grid_cmd->add_option("--mu-max-ratio", mu_max_ratio, "largest prior mean, ratio scale");
  grid_cmd->add_option("--tau-min", grid_tau_min, "smallest prior sd")->capture_default_str();
  grid_cmd->add_option("--tau-max", grid_tau_max, "largest prior sd")->capture_default_str();
  grid_cmd->add_option("--n-mu", n_mu, "grid points along mu")->capture_default_str();
  grid_cmd->add_option("--n-tau", n_tau, "grid points along tau")->capture_default_str();
  grid_cmd->add_option("--clip-floor", clip_floor, "display clip for small BF values")
      ->capture_default_str();
  grid_cmd->add_option("--truncate", grid_truncate, "prior truncation")
      ->check(CLI::IsMember({"auto", "none", "below-one", "above-one", "below_one", "above_one"}))
      ->capture_default_str();
  grid_cmd->add_option("--threads", threads, "worker threads (0 = hardware)")
      ->capture_default_str();
  grid_cmd->add_option("--title", title, "SVG title (default: label)");

  // reverse
  auto* reverse_cmd = app.add_subcommand("reverse", "mu intervals with BF >= gamma per tau");
  reverse_cmd->fallthrough();
  EffectFlags reverse_effect;
  add_effect_flags(reverse_cmd, reverse_effect);
  double gamma = 1.0;
  double reverse_tau_min = 0.0;
  double reverse_tau_max = 1.0;
  std::size_t reverse_n_tau = 11;
  std::string reverse_truncate = "auto";
  reverse_cmd->add_option("--gamma", gamma, "evidence threshold")->capture_default_str();
  reverse_cmd->add_option("--tau-min", reverse_tau_min, "smallest prior sd")
      ->capture_default_str();
  reverse_cmd->add_option("--tau-max", reverse_tau_max, "largest prior sd")
      ->capture_default_str();
  reverse_cmd->add_option("--n-tau", reverse_n_tau, "tau axis points")->capture_default_str();
  reverse_cmd->add_option("--truncate", reverse_truncate, "prior truncation")
      ->check(CLI::IsMember({"auto", "none", "below-one", "above-one", "below_one", "above_one"}))
      ->capture_default_str();

  // report
  auto* report_cmd = app.add_subcommand("report", "per-trial evidence report from a batch file");
  report_cmd->fallthrough();
  std::string input;
  double effective_n = 0.0;
  std::string ui_truncate = "none";
  report_cmd->add_option("--input", input, "batch file (.json or delimited text)")->required();
  report_cmd->add_option("--effective-n", effective_n,
                         "effective sample size for the unit-information prior");
  report_cmd->add_option("--ui-truncate", ui_truncate,
                         "truncate the unit-information prior to the benefit side")
      ->check(CLI::IsMember({"none", "benefit"}))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (bf_cmd->parsed()) {
      return run_bf(global, bf_effect, bf_cmd, mean_ratio, mean_log, sd, bf_truncate,
                    unit_info_n);
    }
    if (grid_cmd->parsed()) {
      return run_grid(global, grid_effect, grid_cmd, mu_min_ratio, mu_max_ratio, grid_tau_min,
                      grid_tau_max, n_mu, n_tau, clip_floor, grid_truncate, threads, title);
    }
    if (reverse_cmd->parsed()) {
      return run_reverse(global, reverse_effect, gamma, reverse_tau_min, reverse_tau_max,
                         reverse_n_tau, reverse_truncate);
    }
    return run_report(global, input, report_cmd, effective_n, ui_truncate);
  } catch (const config_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const io_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 1;
  }
}
