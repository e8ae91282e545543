#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <random>

#include <trialbf/bayes_factor.hpp>
#include <trialbf/errors.hpp>

using namespace trialbf;

namespace {

bool rel_close(double a, double b, double tol) {
  if (a == b) return true;
  return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

// 0.96 HR, SE recovered from p = 0.045
LogEffect screening_effect() {
  LogEffect e;
  e.theta_hat = std::log(0.96);
  e.sigma = 0.02036360644632562;
  e.se_source = SeSource::from_p;
  e.benefit_sign = BenefitSign::negative;
  return e;
}

// 1.63 OR, SE recovered from the 0.93-2.85 CI
LogEffect ecmo_effect() {
  LogEffect e;
  e.theta_hat = std::log(1.63);
  e.sigma = 0.2856913943187073;
  e.se_source = SeSource::from_ci;
  e.benefit_sign = BenefitSign::positive;
  return e;
}

LogEffect make_effect(double theta_hat, double sigma) {
  LogEffect e;
  e.theta_hat = theta_hat;
  e.sigma = sigma;
  return e;
}

}  // namespace

TEST_CASE("bf_point basics") {
  const auto at_null = bf_point(make_effect(0.3, 0.1), 0.0);
  CHECK(at_null.log_bf == 0.0);
  CHECK(at_null.bf == 1.0);
  CHECK(at_null.kind == BfKind::point);
  CHECK(at_null.prior.tau == 0.0);

  // point mass at the estimate maximizes the BF: exp(z^2/2)
  const auto max1 = bf_point(screening_effect(), screening_effect().theta_hat);
  CHECK(rel_close(max1.bf, 7.458242193389087, 1e-12));
  const auto max2 = bf_point(ecmo_effect(), ecmo_effect().theta_hat);
  CHECK(rel_close(max2.bf, 4.316028730386459, 1e-12));

  CHECK_THROWS_AS(bf_point(screening_effect(), std::numeric_limits<double>::infinity()),
                  domain_error);
}

TEST_CASE("bf_point at the design ratio of the screening trial") {
  const auto result = bf_point(screening_effect(), std::log(0.7));
  CHECK(rel_close(result.log_bf, -118.28094684386932, 1e-12));
  CHECK(result.bf < 1e-3);
  CHECK(std::isfinite(result.log_bf));
}

TEST_CASE("bf_normal closed form") {
  // theta_hat = 0, mu = 0: BF = sigma / sqrt(sigma^2 + tau^2)
  for (double tau : {0.1, 0.5, 1.0, 3.0}) {
    const auto r = bf_normal(make_effect(0.0, 0.25), PriorSpec{0.0, tau, Truncation::none});
    CHECK(rel_close(r.log_bf, -0.5 * std::log1p(tau * tau / 0.0625), 1e-14));
    CHECK(r.kind == BfKind::bf10);
  }

  const auto r2 = bf_normal(ecmo_effect(), PriorSpec{0.0, 1.0, Truncation::none});
  CHECK(rel_close(r2.bf, 1.0617454897371235, 1e-12));

  // tau = 0 routes to the point prior
  const auto pt = bf_normal(screening_effect(), PriorSpec{0.2, 0.0, Truncation::none});
  const auto direct = bf_point(screening_effect(), 0.2);
  CHECK(pt.log_bf == direct.log_bf);
  CHECK(pt.kind == BfKind::point);

  // widening the prior beyond the data scale drives the BF to zero
  double prev = bf_normal(ecmo_effect(), PriorSpec{0.0, 4.0, Truncation::none}).log_bf;
  for (double tau = 8.0; tau <= 4096.0; tau *= 2.0) {
    const double cur = bf_normal(ecmo_effect(), PriorSpec{0.0, tau, Truncation::none}).log_bf;
    CHECK(cur < prev);
    prev = cur;
  }

  CHECK_THROWS_AS(bf_normal(ecmo_effect(), PriorSpec{0.0, 1.0, Truncation::positive_only}),
                  domain_error);
}

TEST_CASE("bf_trunc reference value and half-normal identity") {
  const auto r = bf_trunc(ecmo_effect(), PriorSpec{0.0, 1.0, Truncation::positive_only});
  CHECK(rel_close(r.bf, 2.0172119028055063, 1e-12));
  CHECK(r.kind == BfKind::bf_plus0);

  // for mu = 0 the truncation correction is ln 2 + ln Phi(z_posterior)
  const auto base = bf_normal(ecmo_effect(), PriorSpec{0.0, 1.0, Truncation::none});
  const auto& e = ecmo_effect();
  const double s2 = e.sigma * e.sigma;
  const double s = e.theta_hat / s2;  // mu = 0 contributes nothing
  const double q = 1.0 / s2 + 1.0;
  const double correction = std::log(2.0) + std_normal_log_cdf(s / std::sqrt(q));
  CHECK(std::abs((r.log_bf - base.log_bf) - correction) < 1e-13);

  const auto neg = bf_trunc(ecmo_effect(), PriorSpec{0.0, 1.0, Truncation::negative_only});
  CHECK(neg.kind == BfKind::bf_minus0);
  // the data favour the positive side, so the negative-side BF must be smaller
  CHECK(neg.log_bf < r.log_bf);

  CHECK_THROWS_AS(bf_trunc(ecmo_effect(), PriorSpec{0.0, 1.0, Truncation::none}), domain_error);
}

TEST_CASE("bf_trunc point-mass routing honours the support") {
  const auto effect = ecmo_effect();
  const auto ok = bf_trunc(effect, PriorSpec{0.5, 0.0, Truncation::positive_only});
  const auto direct = bf_point(effect, 0.5);
  CHECK(ok.log_bf == direct.log_bf);
  CHECK(ok.kind == BfKind::point);
  CHECK(ok.prior.truncation == Truncation::positive_only);  // spec echoed back

  CHECK_THROWS_AS(bf_trunc(effect, PriorSpec{-0.5, 0.0, Truncation::positive_only}),
                  domain_error);
  CHECK_THROWS_AS(bf_trunc(effect, PriorSpec{0.0, 0.0, Truncation::positive_only}),
                  domain_error);
  CHECK_THROWS_AS(bf_trunc(effect, PriorSpec{0.5, 0.0, Truncation::negative_only}),
                  domain_error);
}

TEST_CASE("reflection identity is bit-exact") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> theta_dist(-2.0, 2.0);
  std::uniform_real_distribution<double> sigma_dist(0.01, 2.0);
  std::uniform_real_distribution<double> mu_dist(-2.0, 2.0);
  std::uniform_real_distribution<double> tau_dist(0.01, 3.0);

  for (int i = 0; i < 500; ++i) {
    const double theta = theta_dist(rng);
    const double sigma = sigma_dist(rng);
    const double mu = mu_dist(rng);
    const double tau = tau_dist(rng);

    const auto a = bf_normal(make_effect(theta, sigma), PriorSpec{mu, tau, Truncation::none});
    const auto b = bf_normal(make_effect(-theta, sigma), PriorSpec{-mu, tau, Truncation::none});
    CHECK(a.log_bf == b.log_bf);

    const auto p = bf_trunc(make_effect(theta, sigma),
                            PriorSpec{mu, tau, Truncation::positive_only});
    const auto n = bf_trunc(make_effect(-theta, sigma),
                            PriorSpec{-mu, tau, Truncation::negative_only});
    CHECK(p.log_bf == n.log_bf);

    const auto pz = bf_point(make_effect(theta, sigma), mu);
    const auto nz = bf_point(make_effect(-theta, sigma), -mu);
    CHECK(pz.log_bf == nz.log_bf);
  }
}

TEST_CASE("tau -> 0 limit is continuous") {
  std::mt19937_64 rng(123);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> sigma_dist(0.01, 2.0);
  for (int i = 0; i < 200; ++i) {
    const double theta = unit(rng);
    const double mu = unit(rng);
    const double sigma = sigma_dist(rng);
    const auto effect = make_effect(theta, sigma);
    const auto tiny = bf_normal(effect, PriorSpec{mu, 1e-8, Truncation::none});
    const auto point = bf_point(effect, mu);
    CHECK(std::abs(tiny.log_bf - point.log_bf) < 1e-4);
  }

  // same limit through the truncated path when mu sits inside the support
  const auto effect = ecmo_effect();
  const auto tiny = bf_trunc(effect, PriorSpec{0.5, 1e-8, Truncation::positive_only});
  const auto point = bf_point(effect, 0.5);
  CHECK(std::abs(tiny.log_bf - point.log_bf) < 1e-4);
}

TEST_CASE("bf_unit_information delegates and matches its large-n limit") {
  const auto effect = ecmo_effect();
  for (double n : {10.0, 100.0, 1000.0}) {
    PriorSpec prior;
    prior.mu = 0.0;
    prior.tau = std::sqrt(n) * effect.sigma;
    CHECK(bf_unit_information(effect, n).log_bf == bf_normal(effect, prior).log_bf);

    prior.truncation = Truncation::positive_only;
    CHECK(bf_unit_information(effect, n, Truncation::positive_only).log_bf ==
          bf_trunc(effect, prior).log_bf);
  }

  const double n = 1e6;
  const double z = effect.theta_hat / effect.sigma;
  const double limit = std::exp(0.5 * z * z) / std::sqrt(1.0 + n);
  CHECK(rel_close(bf_unit_information(effect, n).bf, limit, 1e-4));

  CHECK_THROWS_AS(bf_unit_information(effect, 0.0), domain_error);
  CHECK_THROWS_AS(bf_unit_information(effect, -3.0), domain_error);
  CHECK_THROWS_AS(bf_unit_information(effect, std::numeric_limits<double>::infinity()),
                  domain_error);
}

TEST_CASE("log_bf stays finite when bf under- or overflows") {
  const auto tiny = bf_point(make_effect(0.05, 0.01), -5.0);
  CHECK(std::isfinite(tiny.log_bf));
  CHECK(tiny.bf == 0.0);  // underflow in the display value only

  const auto huge = bf_point(make_effect(5.0, 0.01), 5.0);
  CHECK(std::isfinite(huge.log_bf));
  CHECK(std::isinf(huge.bf));
}

TEST_CASE("posterior_odds") {
  CHECK(posterior_odds(1.0, 0.25) == 0.25);
  CHECK(posterior_odds(7.46, 1.0) == 7.46);
  CHECK(rel_close(posterior_odds(0.149, 2.0), 0.298, 1e-15));
  CHECK_THROWS_AS(posterior_odds(0.0, 1.0), domain_error);
  CHECK_THROWS_AS(posterior_odds(1.0, 0.0), domain_error);
  CHECK_THROWS_AS(posterior_odds(-2.0, 1.0), domain_error);
}
