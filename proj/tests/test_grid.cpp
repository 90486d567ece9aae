#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "ac/errors.hpp"
#include "ac/grid.hpp"
#include "support/dense_solver.hpp"

using namespace ac;

namespace {

GridField random_field(const GridSpec& spec, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  GridField u(spec);
  for (double& x : u.data()) x = uni(rng);
  return u;
}

}  // namespace

TEST_CASE("laplacian annihilates constants") {
  const GridField u(GridSpec{2.0, 8}, 3.7);
  const GridField lap = laplacian(u);
  for (double x : lap.data()) CHECK(x == 0.0);
}

TEST_CASE("laplacian of a unit impulse is the raw stencil") {
  GridField u(GridSpec{4.0, 4});  // h = 1
  u(0, 0) = 1.0;
  const GridField lap = laplacian(u);
  CHECK(lap(0, 0) == doctest::Approx(-4.0));
  CHECK(lap(1, 0) == doctest::Approx(1.0));
  CHECK(lap(3, 0) == doctest::Approx(1.0));  // periodic left neighbor
  CHECK(lap(0, 1) == doctest::Approx(1.0));
  CHECK(lap(0, 3) == doctest::Approx(1.0));
  CHECK(lap(2, 2) == doctest::Approx(0.0));
  CHECK(lap(1, 1) == doctest::Approx(0.0));
}

TEST_CASE("laplacian matches the dense stencil matrix") {
  for (int m : {4, 8, 16}) {
    const GridSpec spec{1.5, m};
    const GridField u = random_field(spec, 100 + m);
    const GridField a = laplacian(u);
    const GridField b = testing::dense_laplacian(u);
    for (size_t k = 0; k < a.size(); ++k) {
      CHECK(a.data()[k] == doctest::Approx(b.data()[k]).epsilon(1e-13));
    }
  }
}

TEST_CASE("sine product field is an eigenfield of the stencil") {
  const int m = 8;
  const GridSpec spec{2.0 * M_PI, m};
  GridField u(spec);
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < m; ++i) u(i, j) = std::sin(2.0 * M_PI * i / m) * std::sin(2.0 * M_PI * j / m);
  }
  const double h = spec.h();
  const double s = std::sin(M_PI / m);
  const double lambda = -(4.0 / (h * h)) * 2.0 * s * s;
  const GridField lap = laplacian(u);
  const GridField dense = testing::dense_laplacian(u);
  for (size_t k = 0; k < u.size(); ++k) {
    CHECK(lap.data()[k] == doctest::Approx(lambda * u.data()[k]).epsilon(1e-12));
    CHECK(lap.data()[k] == doctest::Approx(dense.data()[k]).epsilon(1e-13));
  }
}

TEST_CASE("gradient basics") {
  SUBCASE("constant field has zero gradient") {
    const auto [gx, gy] = gradient(GridField(GridSpec{1.0, 6}, 2.5));
    for (double x : gx.data()) CHECK(x == 0.0);
    for (double y : gy.data()) CHECK(y == 0.0);
  }
  SUBCASE("two-point wrap alternates sign") {
    GridField u(GridSpec{2.0, 2});  // h = 1
    u(0, 0) = 0.0; u(1, 0) = 1.0;
    u(0, 1) = 0.0; u(1, 1) = 1.0;
    const auto [gx, gy] = gradient(u);
    CHECK(gx(0, 0) == doctest::Approx(1.0));
    CHECK(gx(1, 0) == doctest::Approx(-1.0));  // wraps to u(0,0)
    CHECK(gy(0, 0) == doctest::Approx(0.0));
  }
}

TEST_CASE("summation by parts: <-lap u, u> = ||grad u||^2") {
  const GridField u = random_field(GridSpec{3.0, 8}, 7);
  const GridField lap = laplacian(u);
  GridField neg(u.spec());
  for (size_t k = 0; k < neg.size(); ++k) neg.data()[k] = -lap.data()[k];
  const double lhs = inner(neg, u);
  const double rhs = grad_norm_sq(u);
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-13));
  const auto [gx, gy] = gradient(u);
  CHECK(rhs == doctest::Approx(inner(gx, gx) + inner(gy, gy)).epsilon(1e-13));
}

TEST_CASE("operators are linear") {
  const GridSpec spec{2.0, 8};
  const GridField u = random_field(spec, 1), v = random_field(spec, 2);
  const double a = 1.7, b = -0.3;
  GridField w(spec);
  for (size_t k = 0; k < w.size(); ++k) w.data()[k] = a * u.data()[k] + b * v.data()[k];
  const GridField lw = laplacian(w), lu = laplacian(u), lv = laplacian(v);
  for (size_t k = 0; k < w.size(); ++k) {
    CHECK(lw.data()[k] ==
          doctest::Approx(a * lu.data()[k] + b * lv.data()[k]).epsilon(1e-13));
  }
}

TEST_CASE("inner products and norms") {
  SUBCASE("constant ones on the unit square integrate to 1") {
    const GridField u(GridSpec{1.0, 8}, 1.0);
    CHECK(inner(u, u) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(norm_l2(u) == doctest::Approx(1.0));
  }
  SUBCASE("max norm ignores the h^2 weight") {
    GridField u(GridSpec{1.0, 2});
    u(0, 0) = -3.0; u(1, 0) = 2.0; u(0, 1) = 1.0; u(1, 1) = 0.0;
    CHECK(norm_inf(u) == doctest::Approx(3.0));
  }
  SUBCASE("Cauchy-Schwarz on random fields") {
    for (uint64_t s = 0; s < 20; ++s) {
      const GridField u = random_field(GridSpec{1.0, 8}, 2 * s);
      const GridField v = random_field(GridSpec{1.0, 8}, 2 * s + 1);
      CHECK(std::abs(inner(u, v)) <= norm_l2(u) * norm_l2(v) + 1e-13);
    }
  }
  SUBCASE("spec mismatch raises a dimension error") {
    const GridField u(GridSpec{1.0, 4}), v(GridSpec{1.0, 8});
    CHECK_THROWS_AS(inner(u, v), DimensionError);
  }
}

TEST_CASE("snapshot export formats") {
  const GridSpec spec{1.0, 4};
  GridField u(spec);
  for (int j = 0; j < 4; ++j) {
    for (int i = 0; i < 4; ++i) u(i, j) = 0.1 * i - 0.2 * j;
  }
  const auto dir = std::filesystem::temp_directory_path() / "ac_grid_test";
  std::filesystem::create_directories(dir);

  const std::string csv = (dir / "u.csv").string();
  write_csv(u, csv);
  std::ifstream in(csv);
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) {
    if (rows == 1) {
      // row index = y index: row 1 starts at u(0,1) = -0.2
      CHECK(line.substr(0, 4) == "-0.2");
    }
    ++rows;
  }
  CHECK(rows == 4);

  const std::string pgm = (dir / "u.pgm").string();
  write_pgm(u, pgm, 1.0);
  std::ifstream pin(pgm, std::ios::binary);
  std::string magic;
  pin >> magic;
  CHECK(magic == "P5");
  int w = 0, h = 0, maxval = 0;
  pin >> w >> h >> maxval;
  CHECK(w == 4);
  CHECK(h == 4);
  CHECK(maxval == 255);
  pin.get();  // single whitespace after header
  char first;
  pin.get(first);
  // u(0,0) = 0 maps to the midpoint of [-1,1] -> 128
  CHECK(static_cast<unsigned char>(first) == 128);
}

TEST_CASE("finite check flags bad values") {
  GridField u(GridSpec{1.0, 4});
  CHECK_NOTHROW(check_finite(u, "u"));
  u(1, 2) = std::nan("");
  CHECK_THROWS_AS(check_finite(u, "u"), ParamError);
}
