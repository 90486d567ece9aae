// acsolve: experiment driver for the stabilized variable-step phase-field
// schemes. Subcommands map onto the harness operations; exit codes are the
// contract: 0 ok, 1 config/validation error, 2 a checked property failed,
// 3 runtime failure.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <random>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "ac/config.hpp"
#include "ac/errors.hpp"
#include "ac/harness.hpp"
#include "ac/solver.hpp"

#include "support/dense_solver.hpp"
#include "support/oracles.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitProperty = 2;
constexpr int kExitRuntime = 3;

struct CommonArgs {
  std::string config_path;
  std::string out_override;
  std::optional<uint64_t> seed_override;
};

ac::RunConfig load_config(const CommonArgs& args) {
  ac::RunConfig rc = ac::RunConfig::from_file(args.config_path);
  if (!args.out_override.empty()) rc.out_dir = args.out_override;
  if (args.seed_override) {
    rc.seed = *args.seed_override;
    rc.ic.seed = *args.seed_override;
  }
  std::filesystem::create_directories(rc.out_dir);
  return rc;
}

void write_metadata(const ac::RunConfig& rc, const std::string& command) {
  nlohmann::json j;
  j["command"] = command;
  j["potential"] = rc.setup.scheme.potential.name();
  j["beta"] = rc.setup.scheme.potential.beta();
  j["kappa"] = rc.setup.scheme.kappa;
  j["eps2"] = rc.setup.scheme.eps2;
  j["variant"] = ac::variant_name(rc.setup.scheme.variant);
  j["stabilizer"] = rc.setup.scheme.stabilizer.name();
  j["L"] = rc.setup.space.L;
  j["M"] = rc.setup.space.M;
  j["T"] = rc.T;
  j["grid"] = rc.grid_kind;
  j["seed"] = rc.seed;
  j["eta"] = rc.setup.scheme.eta;
  j["prng"] = "mt19937_64";
  j["conventions"] = {
      "modified energy at the final step drops the lookahead term (r_next = 0)",
      "adaptive runs start at tau_min and track the original energy",
      "random initial data is i.i.d. uniform per node, row-major fill",
  };
  std::ofstream out(rc.out_dir + "/run_metadata.json");
  out << j.dump(2) << '\n';
}

int cmd_converge(const CommonArgs& args) {
  ac::RunConfig rc = load_config(args);
  write_metadata(rc, "converge");

  ac::ConvergenceOptions opts;
  opts.kind = rc.grid_kind == "random" ? ac::GridKind::Random : ac::GridKind::Uniform;
  opts.r_max = rc.r_max;
  opts.seed = rc.seed;
  opts.tau_ref = rc.tau_ref;
  opts.first_step_constraint = rc.first_step_constraint;
  opts.out_dir = rc.out_dir;
  if (opts.kind == ac::GridKind::Random) opts.phi_order_tol = 0.3;

  const ac::ConvergenceStudy study =
      ac::convergence_study(rc.setup, rc.ic, rc.T, rc.taus, opts);

  auto show = [](const ac::ExperimentReport& r) {
    std::printf("%-40s order %.3f (stderr %.3f) %s\n", r.label.c_str(),
                r.fitted_order.value_or(0.0), r.fit_stderr,
                r.inconclusive ? "INCONCLUSIVE" : (r.pass ? "pass" : "FAIL"));
  };
  show(study.phi_error);
  show(study.g_error);
  show(study.vg_error);
  std::printf("%-40s %s (worst violation %.3e)\n", "dissipation",
              study.all_dissipative ? "pass" : "FAIL", study.worst_dissipation_violation);

  const bool ok = study.phi_error.pass && study.g_error.pass && study.vg_error.pass &&
                  study.all_dissipative;
  return ok ? kExitOk : kExitProperty;
}

int cmd_mbp(const CommonArgs& args) {
  ac::RunConfig rc = load_config(args);
  write_metadata(rc, "mbp");
  if (rc.taus.empty()) throw ac::ConfigError("time.taus: need at least one value");

  ac::ScanOptions opts;
  opts.out_dir = rc.out_dir;
  const ac::MbpScan scan = ac::mbp_scan(rc.setup, rc.ic, rc.T, rc.taus, opts);

  std::printf("beta = %.6g, practical tau bound = %.4g\n", scan.beta, scan.tau_bound);
  for (const auto& rep : scan.per_variant) {
    for (const auto& [tau, mx] : rep.rows) {
      std::printf("%-16s tau = %-8g max|phi| = %.15g%s\n", rep.label.c_str(), tau, mx,
                  mx > scan.beta + 1e-12 ? "  [exceeds bound]" : "");
    }
  }
  std::printf("within-bound preservation: %s\n", scan.within_bound_ok ? "pass" : "FAIL");
  std::printf("unbalanced variant dominates: %s\n", scan.sesav1_dominates ? "pass" : "FAIL");
  return scan.pass ? kExitOk : kExitProperty;
}

int cmd_energy(const CommonArgs& args) {
  ac::RunConfig rc = load_config(args);
  write_metadata(rc, "energy");
  if (rc.taus.empty()) throw ac::ConfigError("time.taus: need at least one value");

  ac::ScanOptions opts;
  opts.out_dir = rc.out_dir;
  const ac::EnergyStudy study = ac::energy_study(rc.setup, rc.ic, rc.T, rc.taus, opts);
  std::printf("modified energy monotone: %s (worst violation %.3e)\n",
              study.all_monotone ? "pass" : "FAIL", study.worst_violation);
  if (study.gap.fitted_order) {
    std::printf("|E - modified| order %.3f (stderr %.3f)%s\n", *study.gap.fitted_order,
                study.gap.fit_stderr, study.gap.inconclusive ? " INCONCLUSIVE" : "");
  }
  return study.all_monotone ? kExitOk : kExitProperty;
}

int cmd_simulate(const CommonArgs& args) {
  ac::RunConfig rc = load_config(args);
  write_metadata(rc, "simulate");

  if (rc.grid_kind == "adaptive" && rc.benchmark) {
    ac::ScanOptions opts;
    opts.out_dir = rc.out_dir;
    const ac::CoarseningBenchmark bench = ac::coarsening_benchmark(
        rc.setup, rc.ic, rc.adaptive, rc.T, rc.snapshot_times, opts);
    std::printf("%s\n", bench.report.notes.c_str());
    std::printf("step count between uniform bounds: %s\n",
                bench.step_count_ok ? "pass" : "FAIL");
    std::printf("final energy within 2%% of tau_min run: %s (gap %.3g)\n",
                bench.energy_ok ? "pass" : "FAIL", bench.rel_energy_gap);
    std::printf("maximum bound preserved: %s\n", bench.mbp_ok ? "pass" : "FAIL");
    std::printf("modified energy monotone: %s\n", bench.dissipative ? "pass" : "FAIL");
    std::printf("stepsizes within [tau_min, tau_max]: %s\n",
                bench.tau_in_range ? "pass" : "FAIL");
    return bench.pass ? kExitOk : kExitProperty;
  }

  const ac::GridField phi0 = rc.ic.build(rc.setup.space);
  ac::TrajectoryOptions topts;
  topts.trace_csv = rc.out_dir + "/trace.csv";
  topts.snapshot_times = rc.snapshot_times;
  topts.snapshot_dir = rc.snapshot_times.empty() ? "" : rc.out_dir + "/snapshots";

  ac::TrajectoryResult res;
  if (rc.grid_kind == "adaptive") {
    res = ac::run_adaptive(rc.setup, phi0, rc.adaptive, rc.T, topts);
  } else {
    if (rc.taus.empty()) throw ac::ConfigError("time.taus: need at least one value");
    const double tau = rc.taus.front();
    const int N = std::max(1, static_cast<int>(std::llround(rc.T / tau)));
    ac::TimeGrid grid = rc.grid_kind == "uniform"
                            ? ac::uniform_grid(rc.T, N)
                            : ac::random_ratio_grid(rc.T, N, rc.r_max, rc.seed);
    res = ac::run_trajectory(rc.setup, phi0, grid, topts);
  }
  if (res.aborted) {
    std::printf("run aborted at t = %.6g: %s\n", res.final_time, res.abort_message.c_str());
    return kExitProperty;
  }
  std::printf("steps = %d, final t = %.6g, max|phi| = %.15g, dissipative = %s\n",
              res.steps_completed, res.final_time, res.max_norm_overall,
              res.dissipative ? "yes" : "NO");
  return res.dissipative ? kExitOk : kExitProperty;
}

// Built-in invariant suite; no config required.
int cmd_selftest() {
  int failures = 0;
  auto check = [&](bool ok, const char* what) {
    std::printf("[%s] %s\n", ok ? "PASS" : "FAIL", what);
    if (!ok) ++failures;
  };

  // Two-level kernel exactness on polynomials over random admissible grids.
  {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> uni(0.4, 1.0);
    bool ok = true;
    for (int trial = 0; trial < 100 && ok; ++trial) {
      std::vector<double> taus(8);
      for (double& t : taus) t = 0.01 * uni(rng);
      std::vector<double> ts(taus.size() + 1, 0.0);
      for (size_t k = 0; k < taus.size(); ++k) ts[k + 1] = ts[k] + taus[k];
      for (size_t n = 2; n <= taus.size(); ++n) {
        const ac::BdfStep s =
            ac::make_step(static_cast<int>(n), taus[n - 1], taus[n - 2], ac::RatioPolicy{});
        auto d2 = [&](auto p) {
          return s.b0 * (p(ts[n]) - p(ts[n - 1])) + s.b1 * (p(ts[n - 1]) - p(ts[n - 2]));
        };
        ok = ok && std::abs(d2([](double) { return 1.0; })) < 1e-10;
        ok = ok && std::abs(d2([](double t) { return t; }) - 1.0) < 1e-10;
        ok = ok && std::abs(d2([](double t) { return t * t; }) - 2.0 * ts[n]) <
                       1e-10 * std::max(1.0, 2.0 * ts[n]);
      }
    }
    check(ok, "two-level kernels differentiate {1, t, t^2} exactly");
  }

  // Kernel positive-definiteness inequality on random sequences.
  {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    std::uniform_real_distribution<double> rdist(0.1, 4.8);
    const double r_max = 4.864 - 1e-3;
    bool ok = true;
    for (int trial = 0; trial < 2000 && ok; ++trial) {
      const int n = 2 + static_cast<int>(rng() % 7);
      std::vector<double> taus(n + 1);
      taus[0] = 0.01 * (0.5 + 0.5 * std::abs(uni(rng)));
      for (int k = 1; k <= n; ++k) taus[k] = taus[k - 1] * std::min(rdist(rng), r_max * 0.999);
      std::vector<double> w(n + 1);
      for (double& x : w) x = uni(rng);
      const double r_n = taus[n - 1] / taus[n - 2];
      const double r_np1 = taus[n] / taus[n - 1];
      const double b0 = (1.0 + 2.0 * r_n) / (taus[n - 1] * (1.0 + r_n));
      const double b1 = -r_n * r_n / (taus[n - 1] * (1.0 + r_n));
      const double lhs = w[n] * (b0 * w[n] + b1 * w[n - 1]);
      const double g_n = ac::g_coefficient(r_np1, r_max, taus[n - 1]) * w[n] * w[n];
      const double g_nm1 = ac::g_coefficient(r_n, r_max, taus[n - 2]) * w[n - 1] * w[n - 1];
      ok = lhs >= g_n - g_nm1 + 1e-3 * w[n] * w[n] / (32.0 * taus[n - 1]) - 1e-12;
    }
    check(ok, "kernel positive-definiteness inequality holds on random data");
  }

  // Practical stepsize thresholds for the two stock potentials.
  {
    const double dw = ac::mbp_tau_bound(2.0, 1e-4, 1.0 / 128, 1.0);
    const ac::Potential fhp = ac::Potential::flory_huggins();
    const double fh = ac::mbp_tau_bound(fhp.kappa_default(), 1e-4, 1.0 / 128, 1.0);
    check(std::abs(dw - 0.0585) <= 5e-5, "double-well stepsize threshold = 0.0585 (3 s.f.)");
    check(std::abs(fh - 0.0343) <= 5e-5, "flory-huggins stepsize threshold = 0.0343 (3 s.f.)");
  }

  // Auxiliary functional: knots, bounds, derivative bound.
  {
    ac::AuxFunctional aux;
    bool ok = std::abs(aux.value(1.0) - 1.0) < 1e-15 && std::abs(aux.derivative(1.0)) < 1e-15;
    double vmax = 0.0, dmax = 0.0;
    for (int k = 0; k <= 200000; ++k) {
      const double z = -10.0 + 20.0 * k / 200000.0;
      const double v = aux.value(z);
      vmax = std::max(vmax, v);
      dmax = std::max(dmax, std::abs(aux.derivative(z)));
      ok = ok && v >= 0.0;
    }
    ok = ok && vmax <= 1.0 + 1e-12 && dmax <= 49.0 / 24.0 + 1e-12;
    check(ok, "auxiliary functional satisfies its bump and slope bounds");
  }

  // Spectral solve against the dense factorization.
  {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    const ac::GridSpec spec{1.0, 8};
    bool ok = true;
    for (int trial = 0; trial < 5 && ok; ++trial) {
      ac::GridField rhs(spec);
      for (double& x : rhs.data()) x = uni(rng);
      const double a = 0.7 + trial * 0.9;
      const double eps2 = 0.003 * (trial + 1);
      const ac::HelmholtzOperator op(spec, a, eps2);
      const ac::GridField u = op.solve(rhs);
      const ac::GridField ud = ac::testing::dense_solve(spec, a, eps2, rhs);
      double diff = 0.0, resid = 0.0;
      const ac::GridField back = op.apply(u);
      for (size_t k = 0; k < u.size(); ++k) {
        diff = std::max(diff, std::abs(u.data()[k] - ud.data()[k]));
        resid = std::max(resid, std::abs(back.data()[k] - rhs.data()[k]));
      }
      ok = diff <= 1e-12 && resid <= 1e-10 * (a * ac::norm_inf(u) + ac::norm_inf(rhs));
    }
    check(ok, "spectral solve matches the dense factorization");
  }

  // Steady states are exact fixed points; scalar reduction agrees.
  {
    ac::SchemeConfig cfg;
    cfg.kappa = 2.0;
    cfg.eps2 = 0.01;
    const ac::GridSpec spec{1.0, 8};
    ac::SchemeState st = ac::init(cfg, ac::GridField(spec, 1.0));
    bool ok = true;
    for (int k = 0; k < 3; ++k) {
      auto [next, rec] = ac::step(cfg, st, 0.1);
      st = std::move(next);
      ok = ok && std::abs(rec.max_norm - 1.0) < 1e-12 && std::abs(st.R) < 1e-12;
    }
    check(ok, "constant minimum is a fixed point of the scheme");

    ac::SchemeState s0 = ac::init(cfg, ac::GridField(spec, 0.5));
    auto [s1, rec1] = ac::step(cfg, s0, 0.1);
    const auto oracle = ac::testing::ScalarStepOracle::first_step(
        cfg.potential, cfg.stabilizer, 0.5, 0.1, cfg.kappa, 1.0);
    const bool agree = std::abs(s1.phi(3, 4) - oracle.phi_new) < 1e-12 &&
                       std::abs(s1.R - oracle.R_new) < 1e-12 &&
                       std::abs(rec1.g_value - oracle.g) < 1e-12;
    check(agree, "grid step reduces to the scalar recursion on constants");
  }

  // The three stabilization variants coincide when V is pinned to 1.
  {
    ac::SchemeConfig cfg;
    cfg.kappa = 2.0;
    cfg.eps2 = 0.01;
    cfg.force_v_one = true;
    const ac::GridSpec spec{1.0, 16};
    ac::GridField phi0 = ac::InitialCondition::random_uniform(-0.8, 0.8, 3).build(spec);
    ac::GridField out[3];
    const ac::SchemeVariant vs[3] = {ac::SchemeVariant::Sesav1, ac::SchemeVariant::Sesav2,
                                     ac::SchemeVariant::Sesav3};
    for (int v = 0; v < 3; ++v) {
      cfg.variant = vs[v];
      ac::SchemeState st = ac::init(cfg, phi0);
      for (int k = 0; k < 3; ++k) st = ac::step(cfg, st, 0.05).first;
      out[v] = st.phi;
    }
    double d = 0.0;
    for (size_t k = 0; k < out[0].size(); ++k) {
      d = std::max(d, std::abs(out[0].data()[k] - out[1].data()[k]));
      d = std::max(d, std::abs(out[0].data()[k] - out[2].data()[k]));
    }
    check(d <= 1e-12, "variants coincide in the consistent limit");
  }

  std::printf("%s\n", failures == 0 ? "selftest: all checks passed" : "selftest: FAILURES");
  return failures == 0 ? kExitOk : kExitProperty;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Structure-preserving phase-field solver and experiment driver"};
  app.require_subcommand(0, 1);

  bool print_defaults = false;
  app.add_flag("--print-defaults", print_defaults, "print the default config and exit");

  CommonArgs args;
  auto add_common = [&](CLI::App* sub, bool need_config) {
    auto* opt = sub->add_option("--config", args.config_path, "config file path");
    if (need_config) opt->required();
    sub->add_option("--out", args.out_override, "output directory override");
    sub->add_option("--seed", args.seed_override, "seed override");
  };

  CLI::App* converge = app.add_subcommand("converge", "temporal convergence study");
  add_common(converge, true);
  CLI::App* mbp = app.add_subcommand("mbp", "maximum-bound scan across variants");
  add_common(mbp, true);
  CLI::App* energy = app.add_subcommand("energy", "energy dissipation and gap study");
  add_common(energy, true);
  CLI::App* simulate = app.add_subcommand("simulate", "single trajectory or adaptive benchmark");
  add_common(simulate, true);
  app.add_subcommand("selftest", "run the built-in invariant suite");

  CLI11_PARSE(app, argc, argv);

  if (print_defaults) {
    std::cout << ac::RunConfig::defaults_text();
    return kExitOk;
  }

  try {
    if (converge->parsed()) return cmd_converge(args);
    if (mbp->parsed()) return cmd_mbp(args);
    if (energy->parsed()) return cmd_energy(args);
    if (simulate->parsed()) return cmd_simulate(args);
    if (app.get_subcommand("selftest")->parsed()) return cmd_selftest();
    std::cout << app.help();
    return kExitOk;
  } catch (const ac::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRuntime;
  }
}
