#pragma once

#include "ac/grid.hpp"
#include "ac/potential.hpp"

namespace ac {

enum class AuxKind { HermiteCutoff, Identity };

/// Auxiliary functional V applied to the exponential ratio g. The cutoff
/// instance is a piecewise cubic-Hermite bump: it is C^1, satisfies
/// V(1) = 1, V'(1) = 0, 0 <= V <= 1, and |V'| <= 49/24. The identity
/// instance V(z) = z reproduces an older stabilizer family for comparison
/// runs; it is unbounded and opts out of those guarantees.
struct AuxFunctional {
  AuxKind kind = AuxKind::HermiteCutoff;

  double value(double z) const;
  double derivative(double z) const;
  double lipschitz_K() const { return kind == AuxKind::HermiteCutoff ? 49.0 / 24.0 : 1.0; }
  const char* name() const { return kind == AuxKind::HermiteCutoff ? "hermite" : "identity"; }
};

/// g_h(v, w) = exp(w) / exp(E_1h[v]), evaluated as a single exponential of
/// the difference. If the exponent exceeds 700 the result is +inf; callers
/// treat that as an aborted step. Propagates DomainError from E_1h.
double g_h(const Potential& p, const GridField& v, double w);

}  // namespace ac
