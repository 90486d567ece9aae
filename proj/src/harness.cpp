#include "ac/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <numbers>
#include <random>
#include <thread>

#include <json.hpp>

#include "ac/errors.hpp"

namespace ac {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_trace_csv(const std::vector<TraceRecord>& rows, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParamError("trace csv: cannot open " + path);
  out << "n,t,tau,max_norm,energy_orig,energy_mod,g_value,v_of_g,psi_max\n";
  for (const TraceRecord& r : rows) {
    out << r.n << ',' << fmt_double(r.t) << ',' << fmt_double(r.tau) << ','
        << fmt_double(r.max_norm) << ',' << fmt_double(r.energy_orig) << ','
        << fmt_double(r.energy_mod) << ',' << fmt_double(r.g_value) << ','
        << fmt_double(r.v_of_g) << ',' << fmt_double(r.psi_max) << '\n';
  }
}

// Runs fn(0..n-1) on up to `threads` workers; rethrows the first failure.
void parallel_runs(int n, int threads, const std::function<void(int)>& fn) {
  threads = std::min(std::max(1, threads), n);
  if (threads <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::mutex err_mtx;
  std::exception_ptr first_error;
  auto worker = [&] {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mtx);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

// Shared per-step bookkeeping for both trajectory drivers.
struct RowSink {
  const RunSetup& setup;
  const TrajectoryOptions& opts;
  TrajectoryResult& res;
  double e_mod_prev = 0.0;
  size_t snap_idx = 0;

  void initial(const SchemeState& state) {
    TraceRecord row;
    row.max_norm = norm_inf(state.phi);
    row.energy_orig = energy_original(setup.scheme, state.phi);
    row.energy_mod = energy_modified(setup.scheme, state, 0.0);
    row.psi_max = row.max_norm;  // psi^0 = phi^0
    e_mod_prev = row.energy_mod;
    res.max_norm_overall = row.max_norm;
    res.max_psi_overall = 0.0;  // the psi bound concerns n >= 1
    push(row, state);
  }

  void finalized(const TraceRecord& row, const SchemeState& state) {
    const double slack = opts.dissipation_tol * (1.0 + std::abs(e_mod_prev));
    const double violation = row.energy_mod - e_mod_prev - slack;
    res.max_dissipation_violation = std::max(res.max_dissipation_violation, violation);
    if (violation > 0.0) res.dissipative = false;
    e_mod_prev = row.energy_mod;
    res.max_norm_overall = std::max(res.max_norm_overall, row.max_norm);
    res.max_psi_overall = std::max(res.max_psi_overall, row.psi_max);
    res.max_energy_gap =
        std::max(res.max_energy_gap, std::abs(row.energy_orig - row.energy_mod));
    res.final_g = row.g_value;
    res.final_v = row.v_of_g;
    push(row, state);
  }

 private:
  void push(const TraceRecord& row, const SchemeState& state) {
    if (opts.keep_trace || row.n == 0) res.trace.push_back(row);
    if (!opts.snapshot_dir.empty()) {
      while (snap_idx < opts.snapshot_times.size() &&
             state.t >= opts.snapshot_times[snap_idx] - 1e-9) {
        const double ts = opts.snapshot_times[snap_idx];
        char name[64];
        std::snprintf(name, sizeof name, "snap_t%g", ts);
        const std::string base = opts.snapshot_dir + "/" + name;
        std::filesystem::create_directories(opts.snapshot_dir);
        write_csv(state.phi, base + ".csv");
        write_pgm(state.phi, base + ".pgm", setup.scheme.potential.beta());
        ++snap_idx;
      }
    }
  }
};

void finish(TrajectoryResult& res, const SchemeState& state, const TrajectoryOptions& opts,
            Clock::time_point t0) {
  res.steps_completed = state.n;
  res.final_time = state.t;
  res.final_phi = state.phi;
  res.final_R = state.R;
  res.wall_seconds = seconds_since(t0);
  if (!opts.trace_csv.empty()) write_trace_csv(res.trace, opts.trace_csv);
}

}  // namespace

InitialCondition InitialCondition::smooth_sine(double amplitude) {
  InitialCondition ic;
  ic.kind = Kind::SmoothSine;
  ic.amplitude = amplitude;
  return ic;
}

InitialCondition InitialCondition::random_uniform(double lo, double hi, uint64_t seed) {
  InitialCondition ic;
  ic.kind = Kind::RandomUniform;
  ic.lo = lo;
  ic.hi = hi;
  ic.seed = seed;
  return ic;
}

GridField InitialCondition::build(const GridSpec& spec) const {
  GridField u(spec);
  if (kind == Kind::SmoothSine) {
    const double w = 2.0 * std::numbers::pi / spec.L;
    const double h = spec.h();
    for (int j = 0; j < spec.M; ++j) {
      for (int i = 0; i < spec.M; ++i) {
        u(i, j) = amplitude * std::sin(w * i * h) * std::sin(w * j * h);
      }
    }
  } else {
    if (!(lo < hi)) throw ParamError("initial condition: need lo < hi");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(lo, hi);
    for (double& x : u.data()) x = dist(rng);
  }
  return u;
}

TrajectoryResult run_trajectory(const RunSetup& setup, const GridField& phi0,
                                const TimeGrid& grid, const TrajectoryOptions& opts) {
  const auto t0 = Clock::now();
  TrajectoryResult res;
  SchemeState state = init(setup.scheme, phi0);
  RowSink sink{setup, opts, res};
  sink.initial(state);

  const int N = grid.steps();
  for (int k = 0; k < N; ++k) {
    const double tau = grid.taus[k];
    try {
      auto [next, rec] = step(setup.scheme, state, tau);
      const double r_next = (k + 1 < N) ? grid.taus[k + 1] / tau : 0.0;
      rec.energy_mod = energy_modified(setup.scheme, next, r_next);
      state = std::move(next);
      sink.finalized(rec, state);
    } catch (const StepError& e) {
      res.aborted = true;
      res.abort_message = e.what();
      break;
    }
  }
  finish(res, state, opts, t0);
  return res;
}

TrajectoryResult run_adaptive(const RunSetup& setup, const GridField& phi0,
                              const AdaptiveParams& params, double T,
                              const TrajectoryOptions& opts) {
  if (!(params.tau_min > 0.0 && params.tau_min <= params.tau_max)) {
    throw ParamError("adaptive: need 0 < tau_min <= tau_max");
  }
  if (!(params.alpha >= 0.0) || !(params.r_max > 1.0)) {
    throw ParamError("adaptive: need alpha >= 0 and r_max > 1");
  }
  const auto t0 = Clock::now();
  TrajectoryResult res;
  SchemeState state = init(setup.scheme, phi0);
  RowSink sink{setup, opts, res};
  sink.initial(state);

  double e_prev = res.trace.front().energy_orig;
  double tau = params.tau_min;  // conservative start in the fast-decay regime
  const double t_end = T - 1e-12 * std::max(1.0, T);
  while (state.t < t_end) {
    const double tau_used = std::min(tau, T - state.t);
    try {
      auto [next, rec] = step(setup.scheme, state, tau_used);
      const double e_n = rec.energy_orig;
      double tau_next = adaptive_next(params, tau_used, e_n, e_prev);
      const double remaining = T - next.t;
      const bool done = remaining <= 1e-12 * std::max(1.0, T);
      if (!done) tau_next = std::min(tau_next, remaining);
      rec.energy_mod = energy_modified(setup.scheme, next, done ? 0.0 : tau_next / tau_used);
      state = std::move(next);
      sink.finalized(rec, state);
      e_prev = e_n;
      tau = tau_next;
    } catch (const StepError& e) {
      res.aborted = true;
      res.abort_message = e.what();
      break;
    }
  }
  finish(res, state, opts, t0);
  return res;
}

GridField reference_solution(const RunSetup& setup, const GridField& phi0, double T,
                             double tau_ref) {
  if (T <= 0.0) return phi0;
  const int N = std::max(1, static_cast<int>(std::llround(T / tau_ref)));
  TrajectoryOptions opts;
  opts.keep_trace = false;
  TrajectoryResult res = run_trajectory(setup, phi0, uniform_grid(T, N), opts);
  if (res.aborted) throw ParamError("reference run aborted: " + res.abort_message);
  return res.final_phi;
}

OrderFit fit_order(const std::vector<std::pair<double, double>>& rows) {
  if (rows.size() < 2) throw ParamError("fit_order: need at least two rows");
  const size_t n = rows.size();
  double sx = 0.0, sy = 0.0;
  std::vector<double> xs(n), ys(n);
  for (size_t i = 0; i < n; ++i) {
    xs[i] = std::log(rows[i].first);
    ys[i] = std::log(std::max(rows[i].second, 1e-300));
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  OrderFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (n > 2) {
    double ss_res = 0.0;
    for (size_t i = 0; i < n; ++i) {
      const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
      ss_res += r * r;
    }
    fit.stderr_slope = std::sqrt(ss_res / (static_cast<double>(n) - 2.0) / sxx);
  }
  fit.inconclusive = fit.stderr_slope > 0.2;
  return fit;
}

void write_report_csv(const ExperimentReport& rep, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParamError("report csv: cannot open " + path);
  out << "parameter,value\n";
  for (const auto& [p, v] : rep.rows) {
    out << fmt_double(p) << ',' << fmt_double(v) << '\n';
  }
}

void write_summary_json(const std::vector<ExperimentReport>& reps, const std::string& path) {
  nlohmann::json arr = nlohmann::json::array();
  for (const ExperimentReport& r : reps) {
    nlohmann::json j;
    j["label"] = r.label;
    if (r.fitted_order) {
      j["fitted_order"] = *r.fitted_order;
    } else {
      j["fitted_order"] = nullptr;
    }
    j["pass"] = r.pass;
    if (r.inconclusive) j["inconclusive"] = true;
    if (!r.notes.empty()) j["notes"] = r.notes;
    arr.push_back(std::move(j));
  }
  std::ofstream out(path);
  if (!out) throw ParamError("summary json: cannot open " + path);
  out << arr.dump(2) << '\n';
}

uint64_t derive_seed(uint64_t master, uint64_t index) {
  // splitmix64 over the master seed offset by the run index
  uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("ACSOLVE_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

ConvergenceStudy convergence_study(const RunSetup& setup, const InitialCondition& ic, double T,
                                   const std::vector<double>& taus,
                                   const ConvergenceOptions& opts) {
  if (taus.size() < 4) throw ConfigError("taus: need >= 4 values");
  for (size_t i = 1; i < taus.size(); ++i) {
    if (!(taus[i] < taus[i - 1])) throw ConfigError("taus: must be strictly decreasing");
  }
  if (!(opts.tau_ref > 0.0) || opts.tau_ref > taus.back() / 8.0) {
    throw ConfigError("tau_ref: must satisfy 0 < tau_ref <= smallest tau / 8");
  }

  const GridField phi0 = ic.build(setup.space);
  const GridField ref = reference_solution(setup, phi0, T, opts.tau_ref);

  const int n_runs = static_cast<int>(taus.size());
  struct RunOut {
    double tau_label = 0.0;
    double err_phi = 0.0;
    double err_g = 0.0;
    double err_vg = 0.0;
    bool dissipative = true;
    double violation = 0.0;
  };
  std::vector<RunOut> outs(n_runs);

  parallel_runs(n_runs, resolve_threads(opts.threads), [&](int i) {
    TimeGrid grid;
    if (opts.kind == GridKind::Uniform) {
      grid = uniform_grid(T, std::max(1, static_cast<int>(std::llround(T / taus[i]))));
    } else {
      const int N = std::max(1, static_cast<int>(std::llround(T / taus[i])));
      grid = random_ratio_grid(T, N, opts.r_max, derive_seed(opts.seed, i));
    }
    if (opts.first_step_constraint) {
      grid = shrink_first_step(grid, std::pow(grid.max_tau(), 4.0 / 3.0));
    }
    RunSetup rs = setup;
    rs.scheme.eta = eta_star(std::max(1.0, grid.r_max_used));
    TrajectoryOptions topts;
    topts.keep_trace = false;
    TrajectoryResult res = run_trajectory(rs, phi0, grid, topts);
    if (res.aborted) throw ParamError("convergence run aborted: " + res.abort_message);

    RunOut& o = outs[i];
    o.tau_label = (opts.kind == GridKind::Uniform) ? T / grid.steps() : grid.max_tau();
    double e = 0.0;
    for (size_t k = 0; k < ref.size(); ++k) {
      e = std::max(e, std::abs(res.final_phi.data()[k] - ref.data()[k]));
    }
    o.err_phi = e;
    o.err_g = std::abs(res.final_g - 1.0);
    o.err_vg = std::abs(res.final_v - 1.0);
    o.dissipative = res.dissipative;
    o.violation = res.max_dissipation_violation;
  });

  ConvergenceStudy study;
  const std::string tag = std::string(setup.scheme.potential.name()) + "/" +
                          (opts.kind == GridKind::Uniform ? "uniform" : "random");
  study.phi_error.label = "converge/" + tag + "/phi";
  study.g_error.label = "converge/" + tag + "/g";
  study.vg_error.label = "converge/" + tag + "/v_of_g";
  for (const RunOut& o : outs) {
    study.phi_error.rows.emplace_back(o.tau_label, o.err_phi);
    study.g_error.rows.emplace_back(o.tau_label, o.err_g);
    study.vg_error.rows.emplace_back(o.tau_label, o.err_vg);
    study.all_dissipative = study.all_dissipative && o.dissipative;
    study.worst_dissipation_violation = std::max(study.worst_dissipation_violation, o.violation);
  }

  const OrderFit fp = fit_order(study.phi_error.rows);
  study.phi_error.fitted_order = fp.slope;
  study.phi_error.fit_stderr = fp.stderr_slope;
  study.phi_error.inconclusive = fp.inconclusive;
  study.phi_error.pass =
      !fp.inconclusive && std::abs(fp.slope - opts.expected_phi_order) <= opts.phi_order_tol;

  const OrderFit fg = fit_order(study.g_error.rows);
  study.g_error.fitted_order = fg.slope;
  study.g_error.fit_stderr = fg.stderr_slope;
  study.g_error.inconclusive = fg.inconclusive;
  study.g_error.pass =
      !fg.inconclusive && std::abs(fg.slope - opts.expected_g_order) <= opts.g_order_tol;

  const OrderFit fv = fit_order(study.vg_error.rows);
  study.vg_error.fitted_order = fv.slope;
  study.vg_error.fit_stderr = fv.stderr_slope;
  study.vg_error.inconclusive = fv.inconclusive;
  // The functional has quadratic contact at 1, so V(g) should gain at least
  // one full order over g.
  study.vg_error.pass = fv.slope >= fg.slope + 0.7;
  study.vg_error.notes = "expects order(V(g)-1) >= order(g-1) + 1";

  if (!opts.out_dir.empty()) {
    std::filesystem::create_directories(opts.out_dir);
    auto fname = [&](const char* leaf) {
      std::string s = tag + "_" + leaf;
      std::replace(s.begin(), s.end(), '/', '_');
      return opts.out_dir + "/" + s;
    };
    write_report_csv(study.phi_error, fname("phi.csv"));
    write_report_csv(study.g_error, fname("g.csv"));
    write_report_csv(study.vg_error, fname("vg.csv"));
    write_summary_json({study.phi_error, study.g_error, study.vg_error},
                       fname("summary.json"));
  }
  return study;
}

MbpScan mbp_scan(const RunSetup& setup, const InitialCondition& ic, double T,
                 const std::vector<double>& taus, const ScanOptions& opts) {
  if (taus.empty()) throw ConfigError("taus: need at least one value");
  const GridField phi0 = ic.build(setup.space);

  const SchemeVariant variants[3] = {SchemeVariant::Sesav1, SchemeVariant::Sesav2,
                                     SchemeVariant::Sesav3};
  const int n_taus = static_cast<int>(taus.size());
  const int n_runs = 3 * n_taus;
  std::vector<double> maxima(n_runs, 0.0);
  std::vector<bool> run_aborted(n_runs, false);

  parallel_runs(n_runs, resolve_threads(opts.threads), [&](int idx) {
    const int vi = idx / n_taus;
    const int ti = idx % n_taus;
    RunSetup rs = setup;
    rs.scheme.variant = variants[vi];
    const int N = std::max(1, static_cast<int>(std::llround(T / taus[ti])));
    TrajectoryOptions topts;
    topts.keep_trace = false;
    if (!opts.out_dir.empty()) {
      std::filesystem::create_directories(opts.out_dir);
      char leaf[96];
      std::snprintf(leaf, sizeof leaf, "%s/mbp_%s_tau%g_trace.csv", opts.out_dir.c_str(),
                    variant_name(variants[vi]), taus[ti]);
      topts.trace_csv = leaf;
      topts.keep_trace = true;
    }
    TrajectoryResult res = run_trajectory(rs, phi0, uniform_grid(T, N), topts);
    maxima[idx] = res.max_norm_overall;
    run_aborted[idx] = res.aborted;  // logarithmic-potential breach: data, not a crash
  });

  MbpScan scan;
  scan.beta = setup.scheme.potential.beta();
  scan.tau_bound = mbp_tau_bound(setup.scheme.kappa, setup.scheme.eps2, setup.space.h(), 1.0);
  const double tol = 1e-12;
  for (int vi = 0; vi < 3; ++vi) {
    ExperimentReport rep;
    rep.label = std::string("mbp/") + variant_name(variants[vi]);
    bool all_within = true;
    for (int ti = 0; ti < n_taus; ++ti) {
      const double mx = maxima[vi * n_taus + ti];
      rep.rows.emplace_back(taus[ti], mx);
      const bool within = !run_aborted[vi * n_taus + ti] && mx <= scan.beta + tol;
      all_within = all_within && within;
      if (taus[ti] <= scan.tau_bound && !within) scan.within_bound_ok = false;
    }
    rep.pass = all_within;
    scan.per_variant.push_back(std::move(rep));
  }
  // Contrast assertion: where any variant escapes the bound, the unbalanced
  // stabilization must not be the worst offender.
  for (int ti = 0; ti < n_taus; ++ti) {
    const double m1 = maxima[0 * n_taus + ti];
    const double m2 = maxima[1 * n_taus + ti];
    const double m3 = maxima[2 * n_taus + ti];
    const bool contrast = m1 > scan.beta + tol || m2 > scan.beta + tol || m3 > scan.beta + tol;
    if (contrast && (m1 > m2 + tol || m1 > m3 + tol)) scan.sesav1_dominates = false;
  }
  scan.pass = scan.within_bound_ok && scan.sesav1_dominates;

  if (!opts.out_dir.empty()) {
    for (const auto& rep : scan.per_variant) {
      std::string leaf = rep.label;
      std::replace(leaf.begin(), leaf.end(), '/', '_');
      write_report_csv(rep, opts.out_dir + "/" + leaf + ".csv");
    }
    write_summary_json(scan.per_variant, opts.out_dir + "/mbp_summary.json");
  }
  return scan;
}

EnergyStudy energy_study(const RunSetup& setup, const InitialCondition& ic, double T,
                         const std::vector<double>& taus, const ScanOptions& opts) {
  if (taus.empty()) throw ConfigError("taus: need at least one value");
  const GridField phi0 = ic.build(setup.space);

  const int n_runs = static_cast<int>(taus.size());
  std::vector<double> gaps(n_runs, 0.0);
  std::vector<double> violations(n_runs, 0.0);
  std::vector<bool> monotone(n_runs, true);

  parallel_runs(n_runs, resolve_threads(opts.threads), [&](int i) {
    const int N = std::max(1, static_cast<int>(std::llround(T / taus[i])));
    TrajectoryOptions topts;
    topts.keep_trace = false;
    if (!opts.out_dir.empty()) {
      std::filesystem::create_directories(opts.out_dir);
      char leaf[96];
      std::snprintf(leaf, sizeof leaf, "%s/energy_tau%g_trace.csv", opts.out_dir.c_str(),
                    taus[i]);
      topts.trace_csv = leaf;
      topts.keep_trace = true;
    }
    TrajectoryResult res = run_trajectory(setup, phi0, uniform_grid(T, N), topts);
    if (res.aborted) throw ParamError("energy run aborted: " + res.abort_message);
    gaps[i] = res.max_energy_gap;
    violations[i] = res.max_dissipation_violation;
    monotone[i] = res.dissipative;
  });

  EnergyStudy study;
  study.gap.label = std::string("energy/") + setup.scheme.potential.name() + "/gap";
  for (int i = 0; i < n_runs; ++i) {
    study.gap.rows.emplace_back(taus[i], gaps[i]);
    study.all_monotone = study.all_monotone && monotone[i];
    study.worst_violation = std::max(study.worst_violation, violations[i]);
  }
  if (study.gap.rows.size() >= 2) {
    const OrderFit fit = fit_order(study.gap.rows);
    study.gap.fitted_order = fit.slope;
    study.gap.fit_stderr = fit.stderr_slope;
    study.gap.inconclusive = fit.inconclusive;
  }
  study.gap.pass = study.all_monotone;
  if (!opts.out_dir.empty()) {
    write_report_csv(study.gap, opts.out_dir + "/energy_gap.csv");
    write_summary_json({study.gap}, opts.out_dir + "/energy_summary.json");
  }
  return study;
}

CoarseningBenchmark coarsening_benchmark(const RunSetup& setup, const InitialCondition& ic,
                                         const AdaptiveParams& params, double T,
                                         const std::vector<double>& snapshot_times,
                                         const ScanOptions& opts) {
  const GridField phi0 = ic.build(setup.space);
  const double beta = setup.scheme.potential.beta();

  std::vector<double> snaps;
  for (double s : snapshot_times) {
    if (s <= T) snaps.push_back(s);
  }
  std::sort(snaps.begin(), snaps.end());

  TrajectoryResult runs[3];
  parallel_runs(3, resolve_threads(opts.threads), [&](int i) {
    TrajectoryOptions topts;
    topts.keep_trace = true;
    RunSetup rs = setup;
    rs.scheme.eta = eta_star(std::max(1.0, params.r_max));
    if (i == 0) {
      if (!opts.out_dir.empty()) {
        std::filesystem::create_directories(opts.out_dir);
        topts.trace_csv = opts.out_dir + "/coarsen_uniform_taumax_trace.csv";
      }
      const int N = std::max(1, static_cast<int>(std::llround(T / params.tau_max)));
      runs[0] = run_trajectory(rs, phi0, uniform_grid(T, N), topts);
    } else if (i == 1) {
      if (!opts.out_dir.empty()) {
        std::filesystem::create_directories(opts.out_dir);
        topts.trace_csv = opts.out_dir + "/coarsen_adaptive_trace.csv";
        topts.snapshot_dir = opts.out_dir + "/snapshots";
        topts.snapshot_times = snaps;
      }
      runs[1] = run_adaptive(rs, phi0, params, T, topts);
    } else {
      if (!opts.out_dir.empty()) {
        std::filesystem::create_directories(opts.out_dir);
        topts.trace_csv = opts.out_dir + "/coarsen_uniform_taumin_trace.csv";
      }
      const int N = std::max(1, static_cast<int>(std::llround(T / params.tau_min)));
      runs[2] = run_trajectory(rs, phi0, uniform_grid(T, N), topts);
    }
  });

  for (const auto& r : runs) {
    if (r.aborted) throw ParamError("coarsening run aborted: " + r.abort_message);
  }

  CoarseningBenchmark bench;
  bench.n_uniform_max = runs[0].steps_completed;
  bench.n_adaptive = runs[1].steps_completed;
  bench.n_uniform_min = runs[2].steps_completed;
  bench.final_e_uniform_max = runs[0].trace.back().energy_orig;
  bench.final_e_adaptive = runs[1].trace.back().energy_orig;
  bench.final_e_uniform_min = runs[2].trace.back().energy_orig;
  bench.wall_uniform_max = runs[0].wall_seconds;
  bench.wall_adaptive = runs[1].wall_seconds;
  bench.wall_uniform_min = runs[2].wall_seconds;

  bench.step_count_ok =
      bench.n_adaptive > bench.n_uniform_max && bench.n_adaptive < bench.n_uniform_min;
  const double denom = std::max(std::abs(bench.final_e_uniform_min), 1e-12);
  bench.rel_energy_gap = std::abs(bench.final_e_adaptive - bench.final_e_uniform_min) / denom;
  bench.energy_ok = bench.rel_energy_gap <= 0.02;
  bench.mbp_ok = true;
  bench.dissipative = true;
  for (const auto& r : runs) {
    bench.mbp_ok = bench.mbp_ok && r.max_norm_overall <= beta + 1e-12;
    bench.dissipative = bench.dissipative && r.dissipative;
  }
  bench.tau_in_range = true;
  const auto& atrace = runs[1].trace;
  for (size_t k = 1; k + 1 < atrace.size(); ++k) {  // final step may be clipped
    const double tau = atrace[k].tau;
    if (tau < params.tau_min * (1.0 - 1e-12) || tau > params.tau_max * (1.0 + 1e-12)) {
      bench.tau_in_range = false;
    }
  }
  if (!atrace.empty() && atrace.back().tau > params.tau_max * (1.0 + 1e-12)) {
    bench.tau_in_range = false;
  }
  bench.pass = bench.step_count_ok && bench.energy_ok && bench.mbp_ok && bench.dissipative &&
               bench.tau_in_range;

  bench.report.label = "coarsen/adaptive";
  bench.report.rows.emplace_back(params.tau_max, bench.n_uniform_max);
  bench.report.rows.emplace_back(T / std::max(1, bench.n_adaptive), bench.n_adaptive);
  bench.report.rows.emplace_back(params.tau_min, bench.n_uniform_min);
  bench.report.pass = bench.pass;
  char note[256];
  std::snprintf(note, sizeof note,
                "steps max/adaptive/min = %d/%d/%d, final E = %.6g/%.6g/%.6g, wall = "
                "%.2fs/%.2fs/%.2fs",
                bench.n_uniform_max, bench.n_adaptive, bench.n_uniform_min,
                bench.final_e_uniform_max, bench.final_e_adaptive, bench.final_e_uniform_min,
                bench.wall_uniform_max, bench.wall_adaptive, bench.wall_uniform_min);
  bench.report.notes = note;
  if (!opts.out_dir.empty()) {
    write_report_csv(bench.report, opts.out_dir + "/coarsen_steps.csv");
    write_summary_json({bench.report}, opts.out_dir + "/coarsen_summary.json");
  }
  return bench;
}

}  // namespace ac
