#include <doctest.h>

#include <cmath>
#include <random>

#include "ac/errors.hpp"
#include "ac/potential.hpp"
#include "support/oracles.hpp"

using namespace ac;

TEST_CASE("double-well values") {
  const Potential p = Potential::double_well();
  CHECK(p.beta() == 1.0);
  CHECK(p.f(0.0) == 0.0);
  CHECK(p.f(1.0) == 0.0);
  CHECK(p.f(-1.0) == 0.0);
  CHECK(p.F(0.0) == doctest::Approx(0.25));
  CHECK(p.F(1.0) == 0.0);
  CHECK(p.kappa_default() == doctest::Approx(2.0));  // sup |f'| on [-1,1]
  CHECK(p.f_prime(0.0) == doctest::Approx(1.0));
}

TEST_CASE("flory-huggins bound constant and stabilization") {
  const Potential p = Potential::flory_huggins(0.8, 1.6);
  CHECK(p.beta() == doctest::Approx(0.9575).epsilon(0).scale(1).epsilon(5e-4));
  CHECK(std::abs(p.f(p.beta())) <= 1e-12);  // bisection residual
  CHECK(p.kappa_default() == doctest::Approx(8.02).epsilon(2e-3));
  CHECK(p.f(0.0) == 0.0);  // odd reaction
  // the bound condition itself
  CHECK(p.f(p.beta()) <= 0.0);
  CHECK(p.f(-p.beta()) >= 0.0);
}

TEST_CASE("flory-huggins domain error carries the value") {
  const Potential p = Potential::flory_huggins();
  CHECK_THROWS_AS(p.f(1.0), DomainError);
  CHECK_THROWS_AS(p.F(-1.2), DomainError);
  try {
    p.f_prime(1.5);
    FAIL("expected a domain error");
  } catch (const DomainError& e) {
    CHECK(e.value() == doctest::Approx(1.5));
  }
  CHECK(Potential::flory_huggins(0.8, 1.6).f(0.999) < 0.0);  // still evaluates inside
  CHECK_THROWS_AS(Potential::flory_huggins(1.6, 0.8), ParamError);
}

TEST_CASE("f is minus the derivative of F (finite differences)") {
  const double delta = 1e-5;
  for (const Potential& p : {Potential::double_well(), Potential::flory_huggins()}) {
    const double span = p.beta() * 0.99;
    for (int k = 0; k <= 100; ++k) {
      const double x = -span + 2.0 * span * k / 100;
      const double dF = (p.F(x + delta) - p.F(x - delta)) / (2.0 * delta);
      CHECK(std::abs(p.f(x) + dF) <= 1e-6);
      const double df = (p.f(x + delta) - p.f(x - delta)) / (2.0 * delta);
      CHECK(std::abs(p.f_prime(x) - df) <= 1e-6);
    }
  }
}

TEST_CASE("even potential, odd reaction") {
  for (const Potential& p : {Potential::double_well(), Potential::flory_huggins()}) {
    for (int k = 1; k <= 50; ++k) {
      const double x = 0.95 * p.beta() * k / 50;
      CHECK(p.F(-x) == doctest::Approx(p.F(x)).epsilon(1e-13));
      CHECK(p.f(-x) == doctest::Approx(-p.f(x)).epsilon(1e-13));
    }
  }
}

TEST_CASE("stabilized reaction stays within kappa beta") {
  // |f(xi) + kappa xi| <= kappa beta on [-beta, beta] when kappa >= sup|f'|.
  for (const Potential& p : {Potential::double_well(), Potential::flory_huggins()}) {
    const double kappa = p.kappa_default();
    const double beta = p.beta();
    for (int k = 0; k <= 10000; ++k) {
      const double xi = -beta + 2.0 * beta * k / 10000;
      CHECK(std::abs(p.f(xi) + kappa * xi) <= kappa * beta + 1e-12);
    }
  }
}

TEST_CASE("e1h matches the naive double loop") {
  const Potential p = Potential::double_well();
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> uni(-0.8, 0.8);
  GridField u(GridSpec{1.0, 8});
  for (double& x : u.data()) x = uni(rng);
  CHECK(p.e1h(u) == doctest::Approx(testing::naive_e1h(p, u)).epsilon(1e-14));

  SUBCASE("closed forms on constants") {
    CHECK(p.e1h(GridField(GridSpec{1.0, 8}, 1.0)) == doctest::Approx(0.0));
    CHECK(p.e1h(GridField(GridSpec{1.0, 8}, 0.0)) == doctest::Approx(0.25));
  }
  SUBCASE("domain error propagates") {
    const Potential fh = Potential::flory_huggins();
    CHECK_THROWS_AS(fh.e1h(GridField(GridSpec{1.0, 4}, 1.0)), DomainError);
  }
}
