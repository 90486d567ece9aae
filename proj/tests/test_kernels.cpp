#include <doctest.h>

#include <cmath>
#include <random>

#include "ac/errors.hpp"
#include "ac/kernels.hpp"

using namespace ac;

namespace {

// Random admissible stepsize sequence with ratios below cap.
std::vector<double> random_taus(std::mt19937_64& rng, int n, double cap) {
  std::uniform_real_distribution<double> first(0.005, 0.02);
  std::uniform_real_distribution<double> ratio(0.15, cap);
  std::vector<double> taus(n);
  taus[0] = first(rng);
  for (int k = 1; k < n; ++k) taus[k] = taus[k - 1] * std::min(ratio(rng), cap * 0.999);
  return taus;
}

}  // namespace

TEST_CASE("kernel values") {
  const RatioPolicy policy;
  SUBCASE("first step is backward Euler") {
    const BdfStep s = make_step(1, 0.1, std::nullopt, policy);
    CHECK(s.b0 == doctest::Approx(10.0));
    CHECK(s.b1 == 0.0);
    CHECK(s.r == 0.0);
  }
  SUBCASE("equal steps give the classical 3/2, -1/2 weights") {
    const double tau = 0.2;
    const BdfStep s = make_step(2, tau, tau, policy);
    CHECK(s.b0 == doctest::Approx(1.5 / tau));
    CHECK(s.b1 == doctest::Approx(-0.5 / tau));
  }
  SUBCASE("ratio violations name the failing bound") {
    RatioPolicy mbp;
    mbp.mode = RatioMode::Mbp;
    CHECK_THROWS_WITH_AS(make_step(2, 0.25, 0.1, mbp),
                         doctest::Contains("maximum-bound"), RatioError);
    CHECK_THROWS_WITH_AS(make_step(2, 0.5, 0.1, policy), doctest::Contains("energy"),
                         RatioError);
    bool violated = false;
    RatioPolicy permissive;
    permissive.mode = RatioMode::Permissive;
    CHECK_NOTHROW(make_step(2, 0.5, 0.1, permissive, &violated));
    CHECK(violated);
  }
  SUBCASE("invalid inputs") {
    CHECK_THROWS_AS(make_step(0, 0.1, std::nullopt, policy), ParamError);
    CHECK_THROWS_AS(make_step(2, 0.1, std::nullopt, policy), ParamError);
    CHECK_THROWS_AS(make_step(1, -0.1, std::nullopt, policy), ParamError);
  }
}

TEST_CASE("quadratic functional coefficient") {
  CHECK(g_coefficient(0.0, 4.0, 1.0) == 0.0);
  CHECK(g_coefficient(1.0, 4.0, 1.0) == doctest::Approx(0.5));
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> uni(0.0, 5.0);
  for (int k = 0; k < 100; ++k) {
    CHECK(g_coefficient(uni(rng), 4.863, 0.01 + uni(rng)) >= 0.0);
  }
}

TEST_CASE("recombination parameter and kernels") {
  CHECK(eta_star(1.0) == doctest::Approx(0.5));
  CHECK(eta_star(2.0) == doctest::Approx(8.0 / 9.0));

  SUBCASE("uniform example values") {
    const BdfStep s = make_step(3, 1.0, 1.0, RatioPolicy{});
    const auto d = recombined_kernels(s, 0.5);
    REQUIRE(d.size() == 4);
    CHECK(d[0] == doctest::Approx(1.5));
    CHECK(d[1] == doctest::Approx(0.25));  // b0 eta + b1 = 0.75 - 0.5
    CHECK(d[2] == doctest::Approx(0.125));
    CHECK(d[3] == doctest::Approx(0.0625));
  }
  SUBCASE("geometric decay d_k = eta d_{k-1}") {
    const BdfStep s = make_step(5, 0.02, 0.015, RatioPolicy{});
    const double eta = 0.7;
    const auto d = recombined_kernels(s, eta);
    for (size_t k = 2; k < d.size(); ++k) {
      CHECK(d[k] == doctest::Approx(eta * d[k - 1]).epsilon(1e-13));
    }
  }
  SUBCASE("first-step kernels") {
    const BdfStep s = make_step(1, 0.1, std::nullopt, RatioPolicy{});
    const auto d = recombined_kernels(s, 0.5);
    REQUIRE(d.size() == 2);
    CHECK(d[0] == doctest::Approx(10.0));
    CHECK(d[1] == doctest::Approx(5.0));
  }
  SUBCASE("nonnegative and nonincreasing inside the eta window") {
    std::mt19937_64 rng(17);
    RatioPolicy mbp;
    mbp.mode = RatioMode::Mbp;
    for (int trial = 0; trial < 200; ++trial) {
      const auto taus = random_taus(rng, 6, 2.41);
      const BdfStep s = make_step(6, taus[5], taus[4], mbp);
      const double lower = s.r * s.r / (1.0 + 2.0 * s.r);
      const double eta = lower + (1.0 - lower) * 0.5;
      const auto d = recombined_kernels(s, eta);
      for (size_t k = 0; k < d.size(); ++k) {
        CHECK(d[k] >= 0.0);
        if (k > 0) CHECK(d[k] <= d[k - 1] + 1e-15);
      }
    }
  }
  SUBCASE("eta outside the window is rejected") {
    const BdfStep s = make_step(2, 0.2, 0.1, RatioPolicy{});  // r = 2
    // window lower edge: r^2/(1+2r) = 0.8
    CHECK_THROWS_AS(recombined_kernels(s, 0.75), ParamError);
    CHECK_NOTHROW(recombined_kernels(s, 0.85));
    CHECK_THROWS_AS(recombined_kernels(s, 1.0), ParamError);
  }
}

TEST_CASE("recombined kernels reproduce the two-level operator") {
  // sum_k d^(n)_{n-k} (psi^k - psi^{k-1}) + d^(n)_n psi^0 = D2 phi^n
  // for psi^k = phi^k - eta phi^{k-1}.
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  RatioPolicy mbp;
  mbp.mode = RatioMode::Mbp;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 5);
    const auto taus = random_taus(rng, n, 2.41);
    std::vector<double> phi(n + 1);
    for (double& x : phi) x = uni(rng);

    const BdfStep s = make_step(n, taus[n - 1], taus[n - 2], mbp);
    const double d2 = s.b0 * (phi[n] - phi[n - 1]) + s.b1 * (phi[n - 1] - phi[n - 2]);

    double eta_lo = 0.0;
    for (int k = 1; k < n; ++k) {
      const double r = taus[k] / taus[k - 1];
      eta_lo = std::max(eta_lo, r * r / (1.0 + 2.0 * r));
    }
    const double eta = eta_lo + (1.0 - eta_lo) * 0.6;
    const auto d = recombined_kernels(s, eta);

    std::vector<double> psi(n + 1);
    psi[0] = phi[0];
    for (int k = 1; k <= n; ++k) psi[k] = phi[k] - eta * phi[k - 1];
    double acc = d[n] * psi[0];
    for (int k = 1; k <= n; ++k) acc += d[n - k] * (psi[k] - psi[k - 1]);
    CHECK(acc == doctest::Approx(d2).epsilon(1e-12));
  }
}

TEST_CASE("two-level formula is exact on quadratics") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 100; ++trial) {
    const auto taus = random_taus(rng, 9, 4.8);
    std::vector<double> ts(taus.size() + 1, 0.0);
    for (size_t k = 0; k < taus.size(); ++k) ts[k + 1] = ts[k] + taus[k];
    for (size_t n = 2; n <= taus.size(); ++n) {
      const BdfStep s = make_step(static_cast<int>(n), taus[n - 1], taus[n - 2], RatioPolicy{});
      auto d2 = [&](auto p) {
        return s.b0 * (p(ts[n]) - p(ts[n - 1])) + s.b1 * (p(ts[n - 1]) - p(ts[n - 2]));
      };
      CHECK(std::abs(d2([](double) { return 1.0; })) <= 1e-10);
      CHECK(std::abs(d2([](double t) { return t; }) - 1.0) <= 1e-10);
      const double want = 2.0 * ts[n];
      CHECK(std::abs(d2([](double t) { return t * t; }) - want) <=
            1e-10 * std::max(1.0, std::abs(want)));
    }
  }
}

TEST_CASE("kernel positive-definiteness inequality") {
  // w_n sum_k b_{n-k} w_k >= G[w_n] - G[w_{n-1}] + delta w_n^2 / (32 tau_n)
  // for n >= 2, and w_1^2/tau_1 >= G[w_1] at n = 1.
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  const double delta = 1e-3;
  const double r_max = 4.864 - delta;
  for (int trial = 0; trial < 10000; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 8);
    const auto taus = random_taus(rng, n + 1, r_max);
    std::vector<double> w(n + 1);
    for (double& x : w) x = uni(rng);

    if (n == 1) {
      const double lhs = w[1] * w[1] / taus[0];
      const double r2 = taus[1] / taus[0];
      const double g1 = g_coefficient(r2, r_max, taus[0]) * w[1] * w[1];
      CHECK(lhs - g1 >= -1e-12);
      continue;
    }
    const BdfStep s = make_step(n, taus[n - 1], taus[n - 2], RatioPolicy{});
    const double lhs = w[n] * (s.b0 * w[n] + s.b1 * w[n - 1]);
    const double r_next = taus[n] / taus[n - 1];
    const double gn = g_coefficient(r_next, r_max, taus[n - 1]) * w[n] * w[n];
    const double gp = g_coefficient(s.r, r_max, taus[n - 2]) * w[n - 1] * w[n - 1];
    const double rhs = gn - gp + delta * w[n] * w[n] / (32.0 * taus[n - 1]);
    CHECK(lhs - rhs >= -1e-12);
  }
}

TEST_CASE("stepsize thresholds") {
  SUBCASE("uniform-grid values for the stock potentials") {
    CHECK(mbp_tau_bound(2.0, 1e-4, 1.0 / 128, 1.0) == doctest::Approx(0.0585).epsilon(1e-3));
    CHECK(mbp_tau_bound(8.02, 1e-4, 1.0 / 128, 1.0) == doctest::Approx(0.0343).epsilon(1e-3));
  }
  SUBCASE("practical bound minorizes the per-step bound") {
    const double r_max = 2.0;
    const double eta = eta_star(r_max);
    const double floor = mbp_step_factor(r_max, eta);
    for (int k = 1; k <= 500; ++k) {
      const double r = r_max * k / 501.0;
      CHECK(mbp_step_factor(r, eta) >= floor - 1e-12);
    }
  }
  SUBCASE("uniform case collapses to 1/(2(kappa + 4 eps2/h^2))") {
    const double kappa = 3.0, eps2 = 2e-3, h = 0.05;
    CHECK(mbp_tau_bound(kappa, eps2, h, 1.0) ==
          doctest::Approx(0.5 / (kappa + 4.0 * eps2 / (h * h))).epsilon(1e-14));
  }
}
