#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <random>

#include <trialbf/effect.hpp>
#include <trialbf/errors.hpp>
#include <trialbf/normal.hpp>

using namespace trialbf;

namespace {

bool rel_close(double a, double b, double tol) {
  if (a == b) return true;
  return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

EffectSummary screening_trial() {
  EffectSummary s;
  s.label = "screening";
  s.estimate = 0.96;
  s.scale = Scale::HR;
  s.p_two_sided = 0.045;
  s.benefit_direction = BenefitDirection::below_one;
  return s;
}

EffectSummary ecmo_trial() {
  EffectSummary s;
  s.label = "ecmo";
  s.estimate = 1.63;
  s.scale = Scale::OR;
  s.ci = ConfidenceInterval{0.93, 2.85, 0.95};
  s.p_two_sided = 0.09;
  s.benefit_direction = BenefitDirection::above_one;
  return s;
}

}  // namespace

TEST_CASE("se_from_ci reference values") {
  CHECK(rel_close(se_from_ci(0.92, 1.00, 0.95), 0.02127120947036643, 1e-13));
  CHECK(rel_close(se_from_ci(0.93, 2.85, 0.95), 0.2856913943187073, 1e-13));
  // log-symmetric interval [1/e, e] at 95%: width 2 on the log scale
  CHECK(rel_close(se_from_ci(std::exp(-1.0), std::exp(1.0), 0.95),
                  0.5102134569246539, 1e-13));

  CHECK_THROWS_AS(se_from_ci(0.0, 2.0), domain_error);
  CHECK_THROWS_AS(se_from_ci(2.0, 1.0), domain_error);
  CHECK_THROWS_AS(se_from_ci(1.0, 1.0), domain_error);
  CHECK_THROWS_AS(se_from_ci(0.5, 2.0, 0.0), domain_error);
  CHECK_THROWS_AS(se_from_ci(0.5, 2.0, 1.0), domain_error);
}

TEST_CASE("se_from_p reference values") {
  CHECK(rel_close(se_from_p(-0.04082199452025513, 0.045), 0.02036360644632562, 1e-13));
  CHECK(rel_close(se_from_p(0.4885800148186710, 0.09), 0.2881801785259263, 1e-13));
  // p = 2(1 - Phi(1)) recovers |theta_hat| itself
  CHECK(rel_close(se_from_p(0.7, 0.3173105078629141), 0.7, 1e-12));
  CHECK(rel_close(se_from_p(-0.7, 0.3173105078629141), 0.7, 1e-12));

  CHECK_THROWS_AS(se_from_p(0.0, 0.05), domain_error);
  CHECK_THROWS_AS(se_from_p(0.5, 0.0), domain_error);
  CHECK_THROWS_AS(se_from_p(0.5, 1.0), domain_error);
}

TEST_CASE("se_from_p inverts the z statistic exactly") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> theta_dist(-2.0, 2.0);
  std::uniform_real_distribution<double> p_dist(1e-6, 0.999);
  for (int i = 0; i < 200; ++i) {
    const double theta = theta_dist(rng);
    if (std::abs(theta) < 1e-6) continue;
    const double p = p_dist(rng);
    const double se = se_from_p(theta, p);
    CHECK(rel_close(se * std_normal_quantile(1.0 - 0.5 * p), std::abs(theta), 1e-14));
  }
}

TEST_CASE("CI round trip recovers sigma") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> theta_dist(-1.5, 1.5);
  std::uniform_real_distribution<double> sigma_dist(0.01, 1.0);
  std::uniform_real_distribution<double> level_dist(0.5, 0.999);
  for (int i = 0; i < 300; ++i) {
    const double theta = theta_dist(rng);
    const double sigma = sigma_dist(rng);
    const double level = level_dist(rng);
    const double z = std_normal_quantile(0.5 * (1.0 + level));
    const double lower = std::exp(theta - z * sigma);
    const double upper = std::exp(theta + z * sigma);
    CHECK(rel_close(se_from_ci(lower, upper, level), sigma, 1e-12));
  }
}

TEST_CASE("se_from_ci is invariant under ratio rescaling") {
  // multiplying estimate and bounds by a constant shifts the log estimate
  // but leaves the recovered SE unchanged
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> factor_dist(0.1, 10.0);
  for (int i = 0; i < 100; ++i) {
    const double k = factor_dist(rng);
    const double base = se_from_ci(0.93, 2.85, 0.95);
    const double scaled = se_from_ci(0.93 * k, 2.85 * k, 0.95);
    CHECK(rel_close(scaled, base, 1e-12));
  }
}

TEST_CASE("EffectSummary validation") {
  CHECK_NOTHROW(screening_trial().validate());
  CHECK_NOTHROW(ecmo_trial().validate());

  auto s = screening_trial();
  s.estimate = -0.96;
  CHECK_THROWS_AS(s.validate(), domain_error);
  s.estimate = 0.0;
  CHECK_THROWS_AS(s.validate(), domain_error);

  s = screening_trial();
  s.p_two_sided.reset();
  CHECK_THROWS_AS(s.validate(), domain_error);  // neither CI nor p

  s = ecmo_trial();
  s.ci->lower = s.ci->upper;
  CHECK_THROWS_WITH(s.validate(), Catch::Matchers::ContainsSubstring("degenerate"));

  s = ecmo_trial();
  s.ci->lower = 3.0;
  CHECK_THROWS_AS(s.validate(), domain_error);  // lower > upper

  s = ecmo_trial();
  s.ci = ConfidenceInterval{1.7, 2.85, 0.95};
  CHECK_THROWS_AS(s.validate(), domain_error);  // estimate below lower

  s = ecmo_trial();
  s.ci->level = 1.0;
  CHECK_THROWS_AS(s.validate(), domain_error);

  s = screening_trial();
  s.p_two_sided = 1.0;
  CHECK_THROWS_AS(s.validate(), domain_error);
  s.p_two_sided = 0.0;
  CHECK_THROWS_AS(s.validate(), domain_error);

  s = screening_trial();
  s.design_effect = 0.7;  // below one, matches below_one benefit
  CHECK_NOTHROW(s.validate());
  s.design_effect = 1.3;  // wrong side
  CHECK_THROWS_AS(s.validate(), domain_error);
  s.design_effect = 1.0;  // exactly one is not on the benefit side
  CHECK_THROWS_AS(s.validate(), domain_error);

  s = ecmo_trial();
  s.design_effect = 1.5;
  CHECK_NOTHROW(s.validate());
  s.design_effect = 0.7;
  CHECK_THROWS_AS(s.validate(), domain_error);
}

TEST_CASE("log_transform uses p when only p is given") {
  const auto effect = log_transform(screening_trial(), SePreference::prefer_ci);
  CHECK(effect.se_source == SeSource::from_p);  // fallback: no CI available
  CHECK(rel_close(effect.theta_hat, -0.04082199452025513, 1e-14));
  CHECK(rel_close(effect.sigma, 0.02036360644632562, 1e-13));
  CHECK(effect.benefit_sign == BenefitSign::negative);
}

TEST_CASE("log_transform prefers the CI when both are given") {
  const auto effect = log_transform(ecmo_trial(), SePreference::prefer_ci);
  CHECK(effect.se_source == SeSource::from_ci);
  CHECK(rel_close(effect.theta_hat, 0.4885800148186710, 1e-14));
  CHECK(rel_close(effect.sigma, 0.2856913943187073, 1e-13));
  CHECK(effect.benefit_sign == BenefitSign::positive);
}

TEST_CASE("log_transform honours prefer_p and falls back to the CI") {
  const auto from_p = log_transform(ecmo_trial(), SePreference::prefer_p);
  CHECK(from_p.se_source == SeSource::from_p);
  CHECK(rel_close(from_p.sigma, 0.2881801785259263, 1e-13));

  auto ci_only = ecmo_trial();
  ci_only.p_two_sided.reset();
  const auto fallback = log_transform(ci_only, SePreference::prefer_p);
  CHECK(fallback.se_source == SeSource::from_ci);
  CHECK(rel_close(fallback.sigma, 0.2856913943187073, 1e-13));
}

TEST_CASE("LogEffect validation") {
  LogEffect e;
  e.theta_hat = 0.1;
  e.sigma = 0.0;
  CHECK_THROWS_AS(e.validate(), domain_error);
  e.sigma = -1.0;
  CHECK_THROWS_AS(e.validate(), domain_error);
  e.sigma = 0.2;
  CHECK_NOTHROW(e.validate());
  e.theta_hat = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(e.validate(), domain_error);
}
