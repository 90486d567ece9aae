#include <doctest.h>

#include <cmath>
#include <random>

#include "ac/stabilizer.hpp"

using namespace ac;

namespace {
const AuxFunctional hermite{};
const AuxFunctional ident{AuxKind::Identity};

// Branch polynomials restated locally so knot checks compare two routes.
double H1(double z) { return -8.0 * z * z * z + 7.0 * z * z; }
double H2(double z) { return 8.0 * z * z * z - 41.0 * z * z + 68.0 * z - 36.0; }
double mid(double z) { return 2.0 * z - z * z; }
}  // namespace

TEST_CASE("bump values at the anchors") {
  CHECK(hermite.value(1.0) == 1.0);
  CHECK(hermite.derivative(1.0) == 0.0);
  CHECK(hermite.value(-0.5) == 0.0);
  CHECK(hermite.value(2.5) == 0.0);
  CHECK(hermite.value(0.5) == doctest::Approx(0.75));
  CHECK(H1(0.5) == doctest::Approx(mid(0.5)));  // both branches at the knot
  CHECK(hermite.lipschitz_K() == doctest::Approx(49.0 / 24.0));
}

TEST_CASE("continuity and C1 matching at the knots") {
  const double eps = 1e-9;
  // values agree across each knot
  CHECK(std::abs(hermite.value(0.0 - eps) - hermite.value(0.0 + eps)) <= 1e-7);
  CHECK(std::abs(H1(0.5) - mid(0.5)) <= 1e-12);
  CHECK(std::abs(mid(1.5) - H2(1.5)) <= 1e-12);
  CHECK(std::abs(H2(2.0) - 0.0) <= 1e-12);
  // derivatives agree across each knot
  CHECK(std::abs(hermite.derivative(0.0 + eps)) <= 1e-7);
  CHECK(std::abs(hermite.derivative(0.5 - eps) - hermite.derivative(0.5 + eps)) <= 1e-7);
  CHECK(std::abs(hermite.derivative(1.5 - eps) - hermite.derivative(1.5 + eps)) <= 1e-7);
  CHECK(std::abs(hermite.derivative(2.0 - eps)) <= 1e-7);
}

TEST_CASE("bump and slope bounds on a dense sample") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> uni(-10.0, 10.0);
  double vmax = 0.0, dmax = 0.0;
  for (int k = 0; k < 1000000; ++k) {
    const double z = uni(rng);
    const double v = hermite.value(z);
    CHECK(v >= 0.0);
    vmax = std::max(vmax, v);
    dmax = std::max(dmax, std::abs(hermite.derivative(z)));
  }
  CHECK(vmax <= 1.0 + 1e-12);
  CHECK(dmax <= 49.0 / 24.0 + 1e-12);
}

TEST_CASE("quadratic contact at z = 1") {
  // V(1+s) - 1 = O(s^2) since V'(1) = 0 and V'' is bounded.
  for (double s : {1e-1, 1e-2, 1e-3}) {
    CHECK(std::abs(hermite.value(1.0 + s) - 1.0) <= 1.1 * s * s);
    CHECK(std::abs(hermite.value(1.0 - s) - 1.0) <= 1.1 * s * s);
  }
}

TEST_CASE("identity functional for the older stabilizer family") {
  CHECK(ident.value(0.3) == 0.3);
  CHECK(ident.value(5.0) == 5.0);  // unbounded: no bump guarantee
  CHECK(ident.derivative(-2.0) == 1.0);
}

TEST_CASE("exponential ratio") {
  const Potential dw = Potential::double_well();
  const GridField zero(GridSpec{1.0, 8}, 0.0);  // E_1h = 0.25 on the unit square

  SUBCASE("w equal to the discrete energy gives exactly 1") {
    const GridField u(GridSpec{1.0, 8}, 0.5);
    CHECK(g_h(dw, u, dw.e1h(u)) == 1.0);
  }
  SUBCASE("scalar arithmetic case") {
    CHECK(g_h(dw, zero, 0.25 + std::log(2.0)) == doctest::Approx(2.0).epsilon(1e-14));
  }
  SUBCASE("overflow guard returns infinity") {
    CHECK(std::isinf(g_h(dw, zero, 0.25 + 701.0)));
    CHECK(g_h(dw, zero, 0.25 + 699.0) > 0.0);  // below the guard still finite
  }
}
