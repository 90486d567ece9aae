#include "ac/timegrid.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "ac/errors.hpp"

namespace ac {

double TimeGrid::max_tau() const {
  double m = 0.0;
  for (double t : taus) m = std::max(m, t);
  return m;
}

TimeGrid uniform_grid(double T, int N) {
  if (!(T > 0.0) || N < 1) throw ParamError("uniform_grid: need T > 0 and N >= 1");
  TimeGrid g;
  g.T = T;
  g.r_max_used = 1.0;
  g.taus.assign(N, T / N);
  return g;
}

TimeGrid random_ratio_grid(double T, int N, double r_max, uint64_t seed) {
  if (!(T > 0.0) || N < 1) throw ParamError("random_ratio_grid: need T > 0 and N >= 1");
  if (!(r_max > 1.0)) throw ParamError("random_ratio_grid: r_max must exceed 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(1.0 / r_max, 1.0);
  std::vector<double> theta(N);
  double sum = 0.0;
  for (double& th : theta) {
    do {
      th = dist(rng);
    } while (th <= 1.0 / r_max);  // open interval on both ends
    sum += th;
  }
  TimeGrid g;
  g.T = T;
  g.r_max_used = r_max;
  g.taus.resize(N);
  for (int k = 0; k < N; ++k) g.taus[k] = T * theta[k] / sum;
  return g;
}

TimeGrid shrink_first_step(const TimeGrid& grid, double tau_cap) {
  if (grid.taus.empty() || grid.taus.front() <= tau_cap) return grid;
  const double budget = grid.taus.front();
  const double rho = 2.0;
  // Geometric ramp a, a*rho, ..., summing to the original first step with
  // a <= tau_cap.
  int m = 2;
  double a;
  for (;; ++m) {
    a = budget * (rho - 1.0) / (std::pow(rho, m) - 1.0);
    if (a <= tau_cap) break;
    if (m > 64) throw ParamError("shrink_first_step: cap too small");
  }
  TimeGrid out;
  out.T = grid.T;
  out.taus.reserve(grid.taus.size() + m - 1);
  double s = a;
  for (int k = 0; k < m; ++k) {
    out.taus.push_back(s);
    s *= rho;
  }
  // Make the ramp sum exactly to the budget.
  double ramp_sum = 0.0;
  for (int k = 0; k < m; ++k) ramp_sum += out.taus[k];
  out.taus[m - 1] += budget - ramp_sum;
  out.taus.insert(out.taus.end(), grid.taus.begin() + 1, grid.taus.end());
  double rmax = 0.0;
  for (size_t k = 1; k < out.taus.size(); ++k) {
    rmax = std::max(rmax, out.taus[k] / out.taus[k - 1]);
  }
  out.r_max_used = std::max(grid.r_max_used, rmax);
  return out;
}

double adaptive_next(const AdaptiveParams& p, double tau_n, double E_n, double E_prev) {
  if (!(tau_n > 0.0)) throw ParamError("adaptive_next: tau must be positive");
  const double slope = (E_n - E_prev) / tau_n;
  const double target = p.tau_max / std::sqrt(1.0 + p.alpha * slope * slope);
  return std::min(std::max(p.tau_min, target), p.r_max * tau_n);
}

}  // namespace ac
