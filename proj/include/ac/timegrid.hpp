#pragma once

#include <cstdint>
#include <vector>

namespace ac {

/// Pregenerated sequence of positive stepsizes summing to the horizon T.
struct TimeGrid {
  std::vector<double> taus;
  double T = 0.0;
  double r_max_used = 1.0;

  int steps() const { return static_cast<int>(taus.size()); }
  double max_tau() const;
};

/// N equal steps of T/N.
TimeGrid uniform_grid(double T, int N);

/// Random-ratio grid: tau_k = T theta_k / sum(theta), theta_k drawn i.i.d.
/// from the open interval (1/r_max, 1) with a seeded mt19937_64. Adjacent
/// ratios are < r_max by construction; identical seeds give identical grids.
TimeGrid random_ratio_grid(double T, int N, double r_max, uint64_t seed);

/// Replaces the first step by a short geometric ramp (growth factor <= 2)
/// so that tau_1 <= tau_cap while preserving the total horizon. Used by
/// convergence studies that opt into the first-step restriction.
TimeGrid shrink_first_step(const TimeGrid& grid, double tau_cap);

/// Energy-variation step controller parameters.
struct AdaptiveParams {
  double tau_min = 0.0;
  double tau_max = 0.0;
  double alpha = 0.0;  // >= 0, weight on the squared energy slope
  double r_max = 2.4;  // growth cap on adjacent ratios
};

/// Next stepsize from the energy variation:
///   tau_{n+1} = min( max(tau_min, tau_max / sqrt(1 + alpha |dE|^2)), r_max tau_n ),
/// where dE = (E_n - E_prev)/tau_n is the backward difference quotient.
double adaptive_next(const AdaptiveParams& p, double tau_n, double E_n, double E_prev);

}  // namespace ac
