#pragma once

#include <utility>

#include "ac/grid.hpp"
#include "ac/kernels.hpp"
#include "ac/potential.hpp"
#include "ac/stabilizer.hpp"

namespace ac {

enum class SchemeVariant { Sesav1, Sesav2, Sesav3 };

const char* variant_name(SchemeVariant v);

/// Everything fixed for the duration of a trajectory. `eta` is the kernel
/// recombination parameter used only for the psi diagnostic in the trace
/// (the solve path never recombines).
struct SchemeConfig {
  SchemeVariant variant = SchemeVariant::Sesav1;
  double kappa = 0.0;  // >= 0
  double eps2 = 1.0;   // > 0
  Potential potential = Potential::double_well();
  AuxFunctional stabilizer;
  RatioPolicy ratio_policy;
  double eta = 0.5;  // eta*(1), the uniform-grid default

  // Diagnostic switches (tests and comparison runs).
  bool force_v_one = false;    // pin V = 1: the three variants coincide
  bool zero_reaction = false;  // f == 0: pure heat equation
  bool clamp_to_beta = false;  // logarithmic potential: clamp nonlinear
                               // evaluations into [-beta, beta] instead of
                               // raising a domain error
};

/// (phi^n, phi^{n-1}, R^n, t_n, n, tau_n) -- the full per-trajectory state.
struct SchemeState {
  int n = 0;       // completed steps
  double t = 0.0;  // current time
  GridField phi;
  GridField phi_prev;      // meaningful when has_prev
  bool has_prev = false;   // false only at n = 0
  double R = 0.0;
  double tau_prev = 0.0;   // stepsize of the last completed step
};

/// Per-step diagnostics row. `energy_mod` as returned by step() drops the
/// lookahead quadratic term (r_next = 0); trajectory drivers refresh it once
/// the next stepsize is known. `clamped` and `ratio_violated` are
/// observational flags, not CSV columns.
struct TraceRecord {
  int n = 0;
  double t = 0.0;
  double tau = 0.0;
  double max_norm = 0.0;
  double energy_orig = 0.0;
  double energy_mod = 0.0;
  double g_value = 1.0;
  double v_of_g = 1.0;
  double psi_max = 0.0;
  bool clamped = false;
  bool ratio_violated = false;
};

/// Initial state {phi^0, R^0 = E_1h[phi^0]}.
SchemeState init(const SchemeConfig& cfg, const GridField& phi0);

/// Backward-Euler predictor: solves
///   ((1/tau + kappa) I - eps2 Lap_h) phi_hat = (1/tau + kappa) phi^{n-1} + f(phi^{n-1}).
/// With kappa >= sup|f'| and ||phi^{n-1}||_inf <= beta this keeps
/// ||phi_hat||_inf <= beta for any tau.
GridField predict(const SchemeConfig& cfg, const SchemeState& state, double tau);

/// Advances one step of the selected stabilized scheme. Writing
/// V* = V(g_h(phi_hat, R^{n-1})) and b0, b1 for the two-level kernels:
///
///   variant 1:  ((b0+kappa) I - eps2 Lap) phi^n
///                  = b0 phi^{n-1} - b1 (phi^{n-1}-phi^{n-2}) + V*(f(phi_hat) + kappa phi_hat)
///               R^n = R^{n-1} - <V* f(phi_hat) - kappa (phi^n - V* phi_hat), phi^n - phi^{n-1}>
///   variant 2:  same operator, V* f(phi_hat) + kappa phi_hat on the right;
///               R^n = R^{n-1} - <V* f(phi_hat) - kappa (phi^n - phi_hat), phi^n - phi^{n-1}>
///   variant 3:  ((b0+kappa V*) I - eps2 Lap) phi^n with V*(f(phi_hat)+kappa phi_hat);
///               R^n = R^{n-1} - V* <f(phi_hat) - kappa (phi^n - phi_hat), phi^n - phi^{n-1}>
///
/// The first step (n = 1) uses b0 = 1/tau_1 and no two-level term.
std::pair<SchemeState, TraceRecord> step(const SchemeConfig& cfg, const SchemeState& state,
                                         double tau);

/// E_h[phi] = (eps2/2) ||grad_h phi||^2 + E_1h[phi].
double energy_original(const SchemeConfig& cfg, const GridField& phi);

/// Modified energy: E + R replaces E_1h plus the nonnegative lookahead term
///   c(r_next) ||phi^n - phi^{n-1}||^2,  c = g_coefficient(r_next, r_max, tau_n),
/// where r_max is the energy-admissibility constant of the ratio policy.
/// At n = 0 the term is absent and the value equals E_h[phi^0].
double energy_modified(const SchemeConfig& cfg, const SchemeState& state, double r_next);

}  // namespace ac
