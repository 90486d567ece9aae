#pragma once

#include <vector>

#include "ac/grid.hpp"

namespace ac {

/// Shifted Helmholtz operator (aI - eps2 * Lap_h) on the periodic grid,
/// diagonalized exactly in the discrete Fourier basis. The symbol entry for
/// mode (p,q) is a - eps2 * lambda_pq with
///   lambda_pq = -(4/h^2)(sin^2(pi p / M) + sin^2(pi q / M)) <= 0,
/// so every entry is >= a > 0 and the operator is positive definite.
///
/// Immutable after construction; solve() allocates its own transform
/// buffers, so a single operator may serve concurrent solves.
class HelmholtzOperator {
 public:
  HelmholtzOperator(GridSpec spec, double a, double eps2);

  /// Solves (aI - eps2 Lap_h) u = rhs by forward transform, division by the
  /// real symbol, inverse transform.
  GridField solve(const GridField& rhs) const;

  /// Applies the operator via the 5-point stencil (residual checks).
  GridField apply(const GridField& u) const;

  double a() const { return a_; }
  double eps2() const { return eps2_; }
  const GridSpec& spec() const { return spec_; }

 private:
  GridSpec spec_;
  double a_;
  double eps2_;
  std::vector<double> symbol_;  // M x (M/2+1), row-major in q
};

}  // namespace ac
