#pragma once

// Hand-rolled scalar and brute-force oracles, kept independent of the
// library solve paths they check.

#include <cmath>

#include "ac/grid.hpp"
#include "ac/potential.hpp"
#include "ac/stabilizer.hpp"

namespace ac::testing {

/// Brute-force E_1h by a naive double loop (no library summation helpers).
inline double naive_e1h(const Potential& p, const GridField& u) {
  double s = 0.0;
  const int m = u.M();
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < m; ++i) s += p.F(u(i, j));
  }
  return u.h() * u.h() * s;
}

/// One constant-field step of the unbalanced scheme reduced to scalars:
/// constants are fixed under the periodic stencil, so the whole update
/// collapses to arithmetic on a single value. area = L^2.
struct ScalarStepOracle {
  double phi_hat = 0.0;
  double g = 0.0;
  double v = 0.0;
  double phi_new = 0.0;
  double R_new = 0.0;

  static ScalarStepOracle first_step(const Potential& pot, const AuxFunctional& aux,
                                     double phi0, double tau, double kappa, double area) {
    ScalarStepOracle o;
    const double R0 = area * pot.F(phi0);
    const double a_pred = 1.0 / tau + kappa;
    o.phi_hat = (a_pred * phi0 + pot.f(phi0)) / a_pred;
    o.g = std::exp(R0 - area * pot.F(o.phi_hat));
    o.v = aux.value(o.g);
    const double b0 = 1.0 / tau;
    o.phi_new = (b0 * phi0 + o.v * (pot.f(o.phi_hat) + kappa * o.phi_hat)) / (b0 + kappa);
    o.R_new = R0 - area *
                       (o.v * pot.f(o.phi_hat) - kappa * (o.phi_new - o.v * o.phi_hat)) *
                       (o.phi_new - phi0);
    return o;
  }
};

}  // namespace ac::testing
