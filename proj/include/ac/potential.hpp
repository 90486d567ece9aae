#pragma once

#include "ac/grid.hpp"

namespace ac {

enum class PotentialKind { DoubleWell, FloryHuggins };

/// Nonlinear potential bundle: F, the reaction f = -F', its derivative f',
/// the maximum-bound constant beta with f(beta) <= 0 <= f(-beta), and the
/// default stabilization constant kappa = sup |f'| on [-beta, beta].
///
/// Double-well:    F = (x^2-1)^2/4,  f = x - x^3,        beta = 1, kappa = 2.
/// Flory-Huggins:  F = (theta/2)[(1+x)ln(1+x)+(1-x)ln(1-x)] - (theta_c/2)x^2,
///                 f = (theta/2)ln((1-x)/(1+x)) + theta_c x,  requires |x| < 1.
class Potential {
 public:
  static Potential double_well();
  static Potential flory_huggins(double theta = 0.8, double theta_c = 1.6);

  PotentialKind kind() const { return kind_; }
  double beta() const { return beta_; }
  double kappa_default() const { return kappa_; }
  double theta() const { return theta_; }
  double theta_c() const { return theta_c_; }
  const char* name() const;

  double F(double x) const;
  double f(double x) const;
  double f_prime(double x) const;

  /// E_1h(u) = <F(u), 1> = h^2 sum F(u_ij). Propagates DomainError.
  double e1h(const GridField& u) const;

 private:
  Potential(PotentialKind kind, double theta, double theta_c);

  PotentialKind kind_;
  double theta_ = 0.0;
  double theta_c_ = 0.0;
  double beta_ = 0.0;
  double kappa_ = 0.0;
};

/// Positive root of f(beta) = 0 for the bound constant: exactly 1 for the
/// double-well case; bisection in (0,1) to |f(beta)| <= 1e-12 for
/// Flory-Huggins. Throws ParamError if no sign change brackets a root.
double compute_beta(PotentialKind kind, double theta, double theta_c);

}  // namespace ac
