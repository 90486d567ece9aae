#include "ac/potential.hpp"

#include <cmath>
#include <string>

#include "ac/errors.hpp"

namespace ac {

namespace {

void require_open_unit(double x) {
  if (!(std::abs(x) < 1.0)) {
    throw DomainError("flory-huggins evaluation at |x| >= 1, x = " + std::to_string(x), x);
  }
}

}  // namespace

Potential Potential::double_well() {
  return Potential(PotentialKind::DoubleWell, 0.0, 0.0);
}

Potential Potential::flory_huggins(double theta, double theta_c) {
  if (!(theta_c > theta && theta > 0.0)) {
    throw ParamError("flory-huggins requires theta_c > theta > 0");
  }
  return Potential(PotentialKind::FloryHuggins, theta, theta_c);
}

Potential::Potential(PotentialKind kind, double theta, double theta_c)
    : kind_(kind), theta_(theta), theta_c_(theta_c) {
  beta_ = compute_beta(kind, theta, theta_c);
  // sup |f'| on [-beta, beta]: for both potentials f' is monotone in x^2,
  // so the extremum sits at the endpoints or the center; a dense sweep
  // guards the stated invariant regardless.
  double k = std::max({std::abs(f_prime(-beta_)), std::abs(f_prime(beta_)),
                       std::abs(f_prime(0.0))});
  const int samples = 10000;
  for (int i = 1; i < samples; ++i) {
    const double x = -beta_ + 2.0 * beta_ * i / samples;
    k = std::max(k, std::abs(f_prime(x)));
  }
  kappa_ = k;
}

const char* Potential::name() const {
  return kind_ == PotentialKind::DoubleWell ? "double-well" : "flory-huggins";
}

double Potential::F(double x) const {
  if (kind_ == PotentialKind::DoubleWell) {
    const double q = x * x - 1.0;
    return 0.25 * q * q;
  }
  require_open_unit(x);
  // log1p keeps the entropy terms accurate near the endpoints.
  return 0.5 * theta_ * ((1.0 + x) * std::log1p(x) + (1.0 - x) * std::log1p(-x)) -
         0.5 * theta_c_ * x * x;
}

double Potential::f(double x) const {
  if (kind_ == PotentialKind::DoubleWell) {
    return x - x * x * x;
  }
  require_open_unit(x);
  return 0.5 * theta_ * (std::log1p(-x) - std::log1p(x)) + theta_c_ * x;
}

double Potential::f_prime(double x) const {
  if (kind_ == PotentialKind::DoubleWell) {
    return 1.0 - 3.0 * x * x;
  }
  require_open_unit(x);
  return -theta_ / (1.0 - x * x) + theta_c_;
}

double Potential::e1h(const GridField& u) const {
  double s = 0.0;
  for (double x : u.data()) s += F(x);
  return u.h() * u.h() * s;
}

double compute_beta(PotentialKind kind, double theta, double theta_c) {
  if (kind == PotentialKind::DoubleWell) return 1.0;

  auto f = [&](double x) {
    return 0.5 * theta * (std::log1p(-x) - std::log1p(x)) + theta_c * x;
  };
  // f(0+) > 0 (since theta_c > theta) and f -> -inf at 1-, so a root is
  // bracketed in (0,1).
  double lo = 1e-12, hi = 1.0 - 1e-15;
  if (!(f(lo) > 0.0 && f(hi) < 0.0)) {
    throw ParamError("compute_beta: no sign change in (0,1)");
  }
  double mid = 0.5;
  for (int it = 0; it < 200; ++it) {
    mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (std::abs(fm) <= 1e-13) break;
    (fm > 0.0 ? lo : hi) = mid;
  }
  return mid;
}

}  // namespace ac
