#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <random>

#include <trialbf/bayes_factor.hpp>
#include <trialbf/errors.hpp>
#include <trialbf/quadrature.hpp>

using namespace trialbf;

namespace {

LogEffect make_effect(double theta_hat, double sigma) {
  LogEffect e;
  e.theta_hat = theta_hat;
  e.sigma = sigma;
  return e;
}

bool rel_close(double a, double b, double tol) {
  if (a == b) return true;
  return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

}  // namespace

TEST_CASE("integrate handles simple integrands") {
  CHECK(rel_close(integrate([](double x) { return x * x; }, 0.0, 1.0), 1.0 / 3.0, 1e-14));
  CHECK(rel_close(integrate([](double x) { return std::sin(x); }, 0.0,
                            3.14159265358979323846),
                  2.0, 1e-13));
  CHECK(integrate([](double) { return 1.0; }, 2.0, 2.0) == 0.0);
  CHECK_THROWS_AS(integrate([](double) { return 1.0; }, 1.0, 0.0), domain_error);
  CHECK_THROWS_AS(integrate([](double) { return 1.0; }, 0.0,
                            std::numeric_limits<double>::infinity()),
                  domain_error);
}

TEST_CASE("oracle matches an exactly known marginal") {
  // theta_hat = 0, sigma = 1, mu = 0, tau = 3: BF = 1/sqrt(1 + 9)
  const double bf = bf_quadrature_oracle(make_effect(0.0, 1.0),
                                         PriorSpec{0.0, 3.0, Truncation::none});
  CHECK(rel_close(bf, 0.3162277660168379, 1e-10));
}

TEST_CASE("oracle requires a spread-out prior") {
  CHECK_THROWS_AS(log_bf_quadrature(make_effect(0.1, 0.5), PriorSpec{0.2, 0.0, Truncation::none}),
                  domain_error);
}

TEST_CASE("closed forms agree with quadrature over random inputs") {
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> theta_dist(-3.0, 3.0);
  std::uniform_real_distribution<double> sigma_dist(0.01, 2.0);
  std::uniform_real_distribution<double> mu_dist(-2.0, 2.0);
  std::uniform_real_distribution<double> tau_dist(0.01, 3.0);

  for (int i = 0; i < 1000; ++i) {
    const auto effect = make_effect(theta_dist(rng), sigma_dist(rng));
    PriorSpec prior;
    prior.mu = mu_dist(rng);
    prior.tau = tau_dist(rng);

    prior.truncation = Truncation::none;
    const double closed_none = bf_normal(effect, prior).log_bf;
    const double oracle_none = log_bf_quadrature(effect, prior);
    REQUIRE(std::abs(closed_none - oracle_none) < 1e-8);

    prior.truncation = Truncation::positive_only;
    const double closed_pos = bf_trunc(effect, prior).log_bf;
    const double oracle_pos = log_bf_quadrature(effect, prior);
    REQUIRE(std::abs(closed_pos - oracle_pos) < 1e-8);

    prior.truncation = Truncation::negative_only;
    const double closed_neg = bf_trunc(effect, prior).log_bf;
    const double oracle_neg = log_bf_quadrature(effect, prior);
    REQUIRE(std::abs(closed_neg - oracle_neg) < 1e-8);
  }
}

TEST_CASE("oracle covers the published examples") {
  const auto screening = make_effect(std::log(0.96), 0.02036360644632562);
  const auto ecmo = make_effect(std::log(1.63), 0.2856913943187073);

  PriorSpec half_normal{0.0, 1.0, Truncation::positive_only};
  CHECK(std::abs(log_bf_quadrature(ecmo, half_normal) -
                 bf_trunc(ecmo, half_normal).log_bf) < 1e-10);

  PriorSpec wide{0.0, 1.0, Truncation::none};
  CHECK(std::abs(log_bf_quadrature(screening, wide) -
                 bf_normal(screening, wide).log_bf) < 1e-10);

  // peak far outside the support: the integral lives on the decaying edge
  PriorSpec opposed{-0.5, 0.2, Truncation::positive_only};
  CHECK(std::abs(log_bf_quadrature(ecmo, opposed) - bf_trunc(ecmo, opposed).log_bf) < 1e-8);
}
