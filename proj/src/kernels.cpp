#include "ac/kernels.hpp"

#include <cmath>
#include <string>

#include "ac/errors.hpp"

namespace ac {

BdfStep make_step(int n, double tau_n, std::optional<double> tau_prev,
                  const RatioPolicy& policy, bool* ratio_violated) {
  if (n < 1) throw ParamError("make_step: step index must be >= 1");
  if (!(tau_n > 0.0)) throw ParamError("make_step: tau must be positive");
  if (ratio_violated) *ratio_violated = false;

  BdfStep s;
  s.n = n;
  s.tau = tau_n;
  if (n == 1) {
    s.r = 0.0;
    s.b0 = 1.0 / tau_n;
    s.b1 = 0.0;
    return s;
  }
  if (!tau_prev || !(*tau_prev > 0.0)) {
    throw ParamError("make_step: previous stepsize required for n >= 2");
  }
  s.r = tau_n / *tau_prev;
  const double limit =
      (policy.mode == RatioMode::Permissive) ? policy.r_max_energy : policy.bound();
  if (s.r >= limit) {
    if (policy.mode == RatioMode::Permissive) {
      if (ratio_violated) *ratio_violated = true;
    } else {
      const char* which = policy.mode == RatioMode::Mbp ? "maximum-bound" : "energy";
      throw RatioError("stepsize ratio " + std::to_string(s.r) + " at step " +
                       std::to_string(n) + " exceeds the " + which + " bound " +
                       std::to_string(limit));
    }
  }
  s.b0 = (1.0 + 2.0 * s.r) / (tau_n * (1.0 + s.r));
  s.b1 = -s.r * s.r / (tau_n * (1.0 + s.r));
  return s;
}

double g_coefficient(double r_next, double r_max, double tau_n) {
  return r_next * std::sqrt(r_max) / (2.0 * (1.0 + r_next) * tau_n);
}

double eta_star(double r_max) {
  const double q = 1.0 + r_max;
  return 2.0 * r_max * r_max / (q * q);
}

std::vector<double> recombined_kernels(const BdfStep& step, double eta) {
  if (!(eta > 0.0 && eta < 1.0)) {
    throw ParamError("recombined_kernels: eta must lie in (0,1)");
  }
  if (step.n >= 2) {
    const double lower = step.r * step.r / (1.0 + 2.0 * step.r);
    if (!(eta > lower)) {
      throw ParamError("recombined_kernels: eta <= r^2/(1+2r), kernels not monotone");
    }
  }
  std::vector<double> d(static_cast<size_t>(step.n) + 1);
  d[0] = step.b0;
  if (step.n == 1) {
    d[1] = eta * d[0];
    return d;
  }
  const double d1 = step.b0 * eta + step.b1;
  double p = 1.0;
  for (int k = 1; k <= step.n; ++k) {
    d[k] = p * d1;  // d_k = eta^{k-1} (b0 eta + b1)
    p *= eta;
  }
  return d;
}

double mbp_step_factor(double s, double eta) {
  return (1.0 - eta) / (eta * eta) * ((1.0 + 2.0 * s) * eta - s * s) / (1.0 + s);
}

double mbp_tau_bound(double kappa, double eps2, double h, double r_max) {
  const double eta = eta_star(r_max);
  return mbp_step_factor(r_max, eta) / (kappa + 4.0 * eps2 / (h * h));
}

double mbp_tau_bound_step(double kappa, double eps2, double h, double r_n, double eta) {
  return mbp_step_factor(r_n, eta) / (kappa + 4.0 * eps2 / (h * h));
}

}  // namespace ac
