#include "ac/scheme.hpp"

#include <cmath>
#include <string>

#include "ac/errors.hpp"
#include "ac/solver.hpp"

namespace ac {

namespace {

// Clamp a copy of the field into [-beta, beta]; used only in the opt-in
// clamp mode for the logarithmic potential.
GridField clamp_field(const GridField& u, double beta, bool* clamped) {
  GridField out = u;
  for (double& x : out.data()) {
    if (x > beta) {
      x = beta;
      *clamped = true;
    } else if (x < -beta) {
      x = -beta;
      *clamped = true;
    }
  }
  return out;
}

bool needs_clamp(const SchemeConfig& cfg, const GridField& u) {
  return cfg.clamp_to_beta && cfg.potential.kind() == PotentialKind::FloryHuggins &&
         norm_inf(u) >= 1.0;
}

GridField reaction(const SchemeConfig& cfg, const GridField& u) {
  GridField out(u.spec());
  if (cfg.zero_reaction) return out;
  for (size_t k = 0; k < u.size(); ++k) {
    out.data()[k] = cfg.potential.f(u.data()[k]);
  }
  return out;
}

}  // namespace

const char* variant_name(SchemeVariant v) {
  switch (v) {
    case SchemeVariant::Sesav1: return "sesav1";
    case SchemeVariant::Sesav2: return "sesav2";
    default: return "sesav3";
  }
}

SchemeState init(const SchemeConfig& cfg, const GridField& phi0) {
  if (!(cfg.kappa >= 0.0)) throw ParamError("scheme: kappa must be >= 0");
  if (!(cfg.eps2 > 0.0)) throw ParamError("scheme: eps2 must be positive");
  check_finite(phi0, "initial field");
  SchemeState s;
  s.phi = phi0;
  s.R = cfg.potential.e1h(phi0);
  return s;
}

GridField predict(const SchemeConfig& cfg, const SchemeState& state, double tau) {
  if (!(tau > 0.0)) throw ParamError("predict: tau must be positive");
  const GridField& phi_old = state.phi;
  const double a = 1.0 / tau + cfg.kappa;

  bool clamped = false;
  const GridField* eval = &phi_old;
  GridField tmp;
  if (needs_clamp(cfg, phi_old)) {
    tmp = clamp_field(phi_old, cfg.potential.beta(), &clamped);
    eval = &tmp;
  }
  GridField rhs = reaction(cfg, *eval);
  for (size_t k = 0; k < rhs.size(); ++k) {
    rhs.data()[k] += a * phi_old.data()[k];
  }
  HelmholtzOperator op(phi_old.spec(), a, cfg.eps2);
  return op.solve(rhs);
}

std::pair<SchemeState, TraceRecord> step(const SchemeConfig& cfg, const SchemeState& state,
                                         double tau) {
  const int n = state.n + 1;
  const double t_new = state.t + tau;
  TraceRecord rec;
  rec.n = n;
  rec.t = t_new;
  rec.tau = tau;

  bool ratio_violated = false;
  const BdfStep bdf =
      make_step(n, tau,
                state.has_prev ? std::optional<double>(state.tau_prev) : std::nullopt,
                cfg.ratio_policy, &ratio_violated);
  rec.ratio_violated = ratio_violated;

  GridField phi_hat;
  try {
    phi_hat = predict(cfg, state, tau);
  } catch (const DomainError& e) {
    throw StepError(std::string("maximum-bound breach in predictor: ") + e.what(), n, t_new);
  }

  // Auxiliary ratio and functional value from the predicted field.
  double g = 1.0, v = 1.0;
  bool clamped = false;
  const GridField* hat_eval = &phi_hat;
  GridField hat_clamped;
  if (needs_clamp(cfg, phi_hat)) {
    hat_clamped = clamp_field(phi_hat, cfg.potential.beta(), &clamped);
    hat_eval = &hat_clamped;
  }
  if (!cfg.force_v_one) {
    try {
      g = g_h(cfg.potential, *hat_eval, state.R);
    } catch (const DomainError& e) {
      throw StepError(std::string("maximum-bound breach in auxiliary ratio: ") + e.what(), n,
                      t_new);
    }
    if (std::isinf(g)) {
      throw StepError("auxiliary ratio overflow (exponent > 700)", n, t_new);
    }
    v = cfg.stabilizer.value(g);
  }
  rec.g_value = g;
  rec.v_of_g = v;

  GridField f_hat;
  try {
    f_hat = reaction(cfg, *hat_eval);
  } catch (const DomainError& e) {
    throw StepError(std::string("maximum-bound breach in reaction: ") + e.what(), n, t_new);
  }

  // Right-hand side: two-level history part plus the stabilized nonlinearity.
  GridField rhs(state.phi.spec());
  const auto& phi0 = state.phi.data();
  if (n >= 2) {
    const auto& phim = state.phi_prev.data();
    for (size_t k = 0; k < rhs.size(); ++k) {
      rhs.data()[k] = bdf.b0 * phi0[k] - bdf.b1 * (phi0[k] - phim[k]);
    }
  } else {
    for (size_t k = 0; k < rhs.size(); ++k) {
      rhs.data()[k] = bdf.b0 * phi0[k];
    }
  }

  double a_op = bdf.b0 + cfg.kappa;
  switch (cfg.variant) {
    case SchemeVariant::Sesav1:
    case SchemeVariant::Sesav3: {
      if (cfg.variant == SchemeVariant::Sesav3) a_op = bdf.b0 + cfg.kappa * v;
      const auto& hat = phi_hat.data();
      for (size_t k = 0; k < rhs.size(); ++k) {
        rhs.data()[k] += v * (f_hat.data()[k] + cfg.kappa * hat[k]);
      }
      break;
    }
    case SchemeVariant::Sesav2: {
      const auto& hat = phi_hat.data();
      for (size_t k = 0; k < rhs.size(); ++k) {
        rhs.data()[k] += v * f_hat.data()[k] + cfg.kappa * hat[k];
      }
      break;
    }
  }

  HelmholtzOperator op(state.phi.spec(), a_op, cfg.eps2);
  GridField phi_new = op.solve(rhs);

  // Auxiliary variable update; explicit once phi^n is known. The inner
  // product pairs the stabilized right-hand side with phi^n - phi^{n-1}.
  GridField diff(phi_new.spec());
  for (size_t k = 0; k < diff.size(); ++k) {
    diff.data()[k] = phi_new.data()[k] - state.phi.data()[k];
  }
  GridField weight(phi_new.spec());
  double scale = 1.0;
  switch (cfg.variant) {
    case SchemeVariant::Sesav1:
      for (size_t k = 0; k < weight.size(); ++k) {
        weight.data()[k] =
            v * f_hat.data()[k] - cfg.kappa * (phi_new.data()[k] - v * phi_hat.data()[k]);
      }
      break;
    case SchemeVariant::Sesav2:
      for (size_t k = 0; k < weight.size(); ++k) {
        weight.data()[k] =
            v * f_hat.data()[k] - cfg.kappa * (phi_new.data()[k] - phi_hat.data()[k]);
      }
      break;
    case SchemeVariant::Sesav3:
      scale = v;
      for (size_t k = 0; k < weight.size(); ++k) {
        weight.data()[k] =
            f_hat.data()[k] - cfg.kappa * (phi_new.data()[k] - phi_hat.data()[k]);
      }
      break;
  }
  const double R_new = state.R - scale * inner(weight, diff);
  if (!std::isfinite(R_new)) {
    throw StepError("auxiliary variable became non-finite", n, t_new);
  }

  SchemeState out;
  out.n = n;
  out.t = t_new;
  out.phi_prev = state.phi;
  out.has_prev = true;
  out.phi = std::move(phi_new);
  out.R = R_new;
  out.tau_prev = tau;

  rec.max_norm = norm_inf(out.phi);
  rec.energy_orig = energy_original(cfg, out.phi);
  rec.energy_mod = energy_modified(cfg, out, 0.0);
  double psi = 0.0;
  for (size_t k = 0; k < out.phi.size(); ++k) {
    psi = std::max(psi, std::abs(out.phi.data()[k] - cfg.eta * out.phi_prev.data()[k]));
  }
  rec.psi_max = psi;
  rec.clamped = clamped;
  return {std::move(out), rec};
}

double energy_original(const SchemeConfig& cfg, const GridField& phi) {
  return 0.5 * cfg.eps2 * grad_norm_sq(phi) + cfg.potential.e1h(phi);
}

double energy_modified(const SchemeConfig& cfg, const SchemeState& state, double r_next) {
  double e = 0.5 * cfg.eps2 * grad_norm_sq(state.phi) + state.R;
  if (state.n >= 1 && r_next > 0.0) {
    GridField diff(state.phi.spec());
    for (size_t k = 0; k < diff.size(); ++k) {
      diff.data()[k] = state.phi.data()[k] - state.phi_prev.data()[k];
    }
    e += g_coefficient(r_next, cfg.ratio_policy.r_max_energy, state.tau_prev) *
         inner(diff, diff);
  }
  return e;
}

}  // namespace ac
