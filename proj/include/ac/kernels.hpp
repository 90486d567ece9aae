#pragma once

#include <optional>
#include <vector>

namespace ac {

enum class RatioMode { Energy, Mbp, Permissive };

/// Admissibility thresholds for adjacent stepsize ratios r_k = tau_k/tau_{k-1}.
/// Energy dissipation needs r_k < 4.864 - delta; the maximum-bound argument
/// needs r_k < 1 + sqrt(2). Permissive mode records violations instead of
/// throwing (exploratory runs past the proven bounds).
struct RatioPolicy {
  double delta = 1e-3;
  double r_max_energy = 4.864 - 1e-3;
  double r_max_mbp = 2.414213562373095;  // 1 + sqrt(2)
  RatioMode mode = RatioMode::Energy;

  double bound() const { return mode == RatioMode::Mbp ? r_max_mbp : r_max_energy; }
};

/// Per-step discrete convolution kernel data for the variable-step
/// two-level formula D2 w^n = b0 (w^n - w^{n-1}) + b1 (w^{n-1} - w^{n-2}).
///
///   n = 1:   b0 = 1/tau_1, b1 = 0 (backward Euler start)
///   n >= 2:  b0 = (1+2r)/(tau(1+r)) > 0, b1 = -r^2/(tau(1+r)) < 0.
struct BdfStep {
  int n = 1;        // step index, >= 1
  double tau = 0.0; // tau_n
  double r = 0.0;   // tau_n / tau_{n-1}; identically 0 at n = 1
  double b0 = 0.0;
  double b1 = 0.0;
};

/// Builds the kernels for step n; validates the ratio against the policy.
/// Throws RatioError naming the violated bound unless the policy is
/// permissive (then `ratio_violated`, if given, is set instead).
BdfStep make_step(int n, double tau_n, std::optional<double> tau_prev,
                  const RatioPolicy& policy, bool* ratio_violated = nullptr);

/// Coefficient c of the quadratic functional G[w] = c w^2 from the kernel
/// positive-definiteness bound: c = r_next sqrt(r_max) / (2 (1+r_next) tau_n).
double g_coefficient(double r_next, double r_max, double tau_n);

/// Recombination parameter eta* = 2 r_max^2 / (1 + r_max)^2.
double eta_star(double r_max);

/// Recombined kernels d_0..d_n for the substitution psi^k = phi^k - eta phi^{k-1}:
/// d_0 = b0; d_k = eta^{k-1} (b0 eta + b1) for 1 <= k <= n (n >= 2);
/// d_1 = eta d_0 at n = 1. Nonnegative and nonincreasing when
/// r^2/(1+2r) < eta < 1; throws ParamError outside that window.
std::vector<double> recombined_kernels(const BdfStep& step, double eta);

/// Stepsize factor K(s) = ((1-eta)/eta^2) ((1+2s) eta - s^2)/(1+s).
double mbp_step_factor(double s, double eta);

/// Practical maximum-bound stepsize threshold
///   tau <= K(r_max) / (kappa + 4 eps2 / h^2)  with eta = eta*(r_max),
/// which minorizes the per-step bound over all ratios below r_max.
double mbp_tau_bound(double kappa, double eps2, double h, double r_max);

/// Per-step variant of the threshold using the actual ratio r_n and eta.
double mbp_tau_bound_step(double kappa, double eps2, double h, double r_n, double eta);

}  // namespace ac
