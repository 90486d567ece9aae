#include "ac/grid.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "ac/errors.hpp"

namespace ac {

GridField laplacian(const GridField& u) {
  const int m = u.M();
  const double inv_h2 = 1.0 / (u.h() * u.h());
  GridField out(u.spec());
  for (int j = 0; j < m; ++j) {
    const int jn = (j + 1 == m) ? 0 : j + 1;
    const int jp = (j == 0) ? m - 1 : j - 1;
    for (int i = 0; i < m; ++i) {
      const int in = (i + 1 == m) ? 0 : i + 1;
      const int ip = (i == 0) ? m - 1 : i - 1;
      out(i, j) = (u(in, j) + u(ip, j) + u(i, jn) + u(i, jp) - 4.0 * u(i, j)) * inv_h2;
    }
  }
  return out;
}

std::pair<GridField, GridField> gradient(const GridField& u) {
  const int m = u.M();
  const double inv_h = 1.0 / u.h();
  GridField gx(u.spec()), gy(u.spec());
  for (int j = 0; j < m; ++j) {
    const int jn = (j + 1 == m) ? 0 : j + 1;
    for (int i = 0; i < m; ++i) {
      const int in = (i + 1 == m) ? 0 : i + 1;
      gx(i, j) = (u(in, j) - u(i, j)) * inv_h;
      gy(i, j) = (u(i, jn) - u(i, j)) * inv_h;
    }
  }
  return {std::move(gx), std::move(gy)};
}

double inner(const GridField& u, const GridField& v) {
  if (!(u.spec() == v.spec())) {
    throw DimensionError("inner: grid specs do not match");
  }
  double s = 0.0;
  const auto& a = u.data();
  const auto& b = v.data();
  for (size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return u.h() * u.h() * s;
}

double norm_l2(const GridField& u) { return std::sqrt(inner(u, u)); }

double norm_inf(const GridField& u) {
  double m = 0.0;
  for (double x : u.data()) m = std::max(m, std::abs(x));
  return m;
}

double mean_value(const GridField& u) {
  double s = 0.0;
  for (double x : u.data()) s += x;
  return s / static_cast<double>(u.size());
}

double grad_norm_sq(const GridField& u) {
  const int m = u.M();
  double s = 0.0;
  for (int j = 0; j < m; ++j) {
    const int jn = (j + 1 == m) ? 0 : j + 1;
    for (int i = 0; i < m; ++i) {
      const int in = (i + 1 == m) ? 0 : i + 1;
      const double dx = u(in, j) - u(i, j);
      const double dy = u(i, jn) - u(i, j);
      s += dx * dx + dy * dy;
    }
  }
  // h^2 weight from the inner product cancels one 1/h^2 from the differences.
  return s;
}

void check_finite(const GridField& u, const char* what) {
  for (double x : u.data()) {
    if (!std::isfinite(x)) {
      throw ParamError(std::string("non-finite value in ") + what);
    }
  }
}

void write_csv(const GridField& u, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParamError("write_csv: cannot open " + path);
  const int m = u.M();
  char buf[32];
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < m; ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", u(i, j));
      out << buf << (i + 1 == m ? '\n' : ',');
    }
  }
}

void write_pgm(const GridField& u, const std::string& path, double display_bound) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParamError("write_pgm: cannot open " + path);
  const int m = u.M();
  out << "P5\n" << m << " " << m << "\n255\n";
  const double lo = -display_bound, hi = display_bound;
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < m; ++i) {
      double t = (u(i, j) - lo) / (hi - lo) * 255.0;
      int v = static_cast<int>(std::lround(t));
      v = std::min(255, std::max(0, v));
      out.put(static_cast<char>(v));
    }
  }
}

}  // namespace ac
