#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "ac/grid.hpp"
#include "ac/scheme.hpp"
#include "ac/timegrid.hpp"

namespace ac {

/// Scheme configuration plus the spatial grid it runs on.
struct RunSetup {
  SchemeConfig scheme;
  GridSpec space;
};

struct InitialCondition {
  enum class Kind { SmoothSine, RandomUniform };
  Kind kind = Kind::SmoothSine;
  double amplitude = 0.1;
  double lo = -0.8;
  double hi = 0.8;
  uint64_t seed = 1;

  static InitialCondition smooth_sine(double amplitude = 0.1);
  static InitialCondition random_uniform(double lo, double hi, uint64_t seed);

  /// Smooth mode: amplitude * sin(2 pi x / L) sin(2 pi y / L).
  /// Random mode: i.i.d. uniform per node, mt19937_64, row-major fill order.
  GridField build(const GridSpec& spec) const;
};

struct TrajectoryOptions {
  double dissipation_tol = 1e-10;  // slack factor: E^n <= E^{n-1} + tol (1 + |E^{n-1}|)
  std::vector<double> snapshot_times;
  std::string snapshot_dir;  // empty: no snapshots
  std::string trace_csv;     // empty: no per-step CSV
  bool keep_trace = true;    // retain rows in memory
};

struct TrajectoryResult {
  std::vector<TraceRecord> trace;  // row 0 is the initial state
  int steps_completed = 0;
  double final_time = 0.0;
  GridField final_phi;
  double final_R = 0.0;
  double final_g = 1.0;  // auxiliary ratio at the last completed step
  double final_v = 1.0;
  double max_norm_overall = 0.0;
  double max_psi_overall = 0.0;
  double max_energy_gap = 0.0;  // max_n |E_h - modified|
  // max over steps of E^n - E^{n-1} - tol (1 + |E^{n-1}|); <= 0 means the
  // modified energy decreased within tolerance on every step.
  double max_dissipation_violation = -std::numeric_limits<double>::infinity();
  bool dissipative = true;
  bool aborted = false;  // a step raised (bound breach / overflow)
  std::string abort_message;
  double wall_seconds = 0.0;
};

/// Runs a pregenerated grid. Steps that raise StepError mark the result
/// aborted instead of propagating (bound breaches are data in scans).
TrajectoryResult run_trajectory(const RunSetup& setup, const GridField& phi0,
                                const TimeGrid& grid, const TrajectoryOptions& opts = {});

/// Energy-variation adaptive run to horizon T; the first step is tau_min and
/// the last step is clipped to land on T. The controller tracks the original
/// discrete energy.
TrajectoryResult run_adaptive(const RunSetup& setup, const GridField& phi0,
                              const AdaptiveParams& params, double T,
                              const TrajectoryOptions& opts = {});

/// Uniform-step reference trajectory; returns phi(T).
GridField reference_solution(const RunSetup& setup, const GridField& phi0, double T,
                             double tau_ref);

struct OrderFit {
  double slope = 0.0;
  double stderr_slope = 0.0;
  double intercept = 0.0;
  bool inconclusive = false;  // stderr of the slope above 0.2
};

/// Least-squares slope of log(value) vs log(param); needs >= 2 rows.
OrderFit fit_order(const std::vector<std::pair<double, double>>& rows);

struct ExperimentReport {
  std::string label;
  std::vector<std::pair<double, double>> rows;  // (parameter, observable)
  std::optional<double> fitted_order;
  double fit_stderr = 0.0;
  bool inconclusive = false;
  bool pass = false;
  std::string notes;
};

void write_report_csv(const ExperimentReport& rep, const std::string& path);
void write_summary_json(const std::vector<ExperimentReport>& reps, const std::string& path);

enum class GridKind { Uniform, Random };

struct ConvergenceOptions {
  GridKind kind = GridKind::Uniform;
  double r_max = 2.4;  // random grids
  uint64_t seed = 1;
  double tau_ref = 0.0;  // must satisfy tau_ref <= min(taus)/8
  bool first_step_constraint = false;
  double expected_phi_order = 2.0;
  double phi_order_tol = 0.25;
  double expected_g_order = 1.0;
  double g_order_tol = 0.3;
  int threads = 0;  // 0 = hardware
  std::string out_dir;
};

struct ConvergenceStudy {
  ExperimentReport phi_error;  // (tau label, Linf error at T)
  ExperimentReport g_error;    // (tau label, |g - 1| at the last step)
  ExperimentReport vg_error;   // (tau label, |V(g) - 1| at the last step)
  bool all_dissipative = true;
  double worst_dissipation_violation = 0.0;
};

/// Runs the tau ladder against a self-generated reference at tau_ref.
/// Throws ConfigError unless taus are strictly decreasing with >= 4 entries.
ConvergenceStudy convergence_study(const RunSetup& setup, const InitialCondition& ic, double T,
                                   const std::vector<double>& taus,
                                   const ConvergenceOptions& opts);

struct ScanOptions {
  int threads = 0;
  std::string out_dir;
};

struct MbpScan {
  std::vector<ExperimentReport> per_variant;  // rows: (tau, max over time of ||phi||_inf)
  double beta = 1.0;
  double tau_bound = 0.0;          // practical threshold for this setup
  bool sesav1_dominates = true;    // per tau: variant-1 max <= variant-2/3 max
  bool within_bound_ok = true;     // runs with tau <= bound stayed <= beta + 1e-12
  bool pass = false;               // both of the above
};

/// Runs every variant over the tau ladder with a shared initial field.
/// Bound breaches of the logarithmic potential abort that run and record the
/// max norm reached; they do not propagate.
MbpScan mbp_scan(const RunSetup& setup, const InitialCondition& ic, double T,
                 const std::vector<double>& taus, const ScanOptions& opts = {});

struct EnergyStudy {
  ExperimentReport gap;  // rows: (tau, max_n |E_h - modified|), fitted order
  bool all_monotone = true;
  double worst_violation = 0.0;
};

/// Uniform-grid energy traces per tau; asserts modified-energy monotonicity
/// and fits the modified-to-original gap order.
EnergyStudy energy_study(const RunSetup& setup, const InitialCondition& ic, double T,
                         const std::vector<double>& taus, const ScanOptions& opts = {});

struct CoarseningBenchmark {
  int n_uniform_max = 0;
  int n_adaptive = 0;
  int n_uniform_min = 0;
  double final_e_uniform_max = 0.0;
  double final_e_adaptive = 0.0;
  double final_e_uniform_min = 0.0;
  double rel_energy_gap = 0.0;  // adaptive vs uniform tau_min
  double wall_uniform_max = 0.0;
  double wall_adaptive = 0.0;
  double wall_uniform_min = 0.0;
  bool step_count_ok = false;
  bool energy_ok = false;
  bool mbp_ok = false;
  bool dissipative = false;
  bool tau_in_range = false;
  bool pass = false;
  ExperimentReport report;
};

/// Long-horizon comparison of uniform tau_max, adaptive, and uniform tau_min
/// trajectories. Snapshot times are clipped to the horizon.
CoarseningBenchmark coarsening_benchmark(const RunSetup& setup, const InitialCondition& ic,
                                         const AdaptiveParams& params, double T,
                                         const std::vector<double>& snapshot_times = {},
                                         const ScanOptions& opts = {});

/// Deterministic per-run seed derived from a master seed and run index.
uint64_t derive_seed(uint64_t master, uint64_t index);

/// Thread budget: explicit count, else the ACSOLVE_THREADS environment
/// variable, else hardware concurrency.
int resolve_threads(int requested);

}  // namespace ac
