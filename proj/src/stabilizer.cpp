#include "ac/stabilizer.hpp"

#include <cmath>
#include <limits>

namespace ac {

double AuxFunctional::value(double z) const {
  if (kind == AuxKind::Identity) return z;
  if (z <= 0.0) return 0.0;
  if (z < 0.5) return (-8.0 * z + 7.0) * z * z;                 // H1
  if (z <= 1.5) return z * (2.0 - z);
  if (z < 2.0) return ((8.0 * z - 41.0) * z + 68.0) * z - 36.0; // H2
  return 0.0;
}

double AuxFunctional::derivative(double z) const {
  if (kind == AuxKind::Identity) return 1.0;
  if (z <= 0.0) return 0.0;
  if (z < 0.5) return (-24.0 * z + 14.0) * z;
  if (z <= 1.5) return 2.0 - 2.0 * z;
  if (z < 2.0) return (24.0 * z - 82.0) * z + 68.0;
  return 0.0;
}

double g_h(const Potential& p, const GridField& v, double w) {
  const double arg = w - p.e1h(v);
  if (arg > 700.0) return std::numeric_limits<double>::infinity();
  return std::exp(arg);
}

}  // namespace ac
