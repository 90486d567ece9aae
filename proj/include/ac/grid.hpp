#pragma once

#include <string>
#include <utility>
#include <vector>

namespace ac {

/// Uniform periodic grid on the square (0,L)^2 with M points per dimension.
/// Nodes are x_ij = (i*h, j*h), i,j in {0..M-1}; indices wrap modulo M.
struct GridSpec {
  double L = 1.0;
  int M = 2;

  double h() const { return L / M; }
  bool operator==(const GridSpec&) const = default;
};

/// M-periodic real-valued grid function. Row-major storage: entry (i,j)
/// lives at j*M + i, so a storage row is a line of constant y-index j.
class GridField {
 public:
  GridField() = default;
  explicit GridField(GridSpec spec, double fill = 0.0)
      : spec_(spec), values_(static_cast<size_t>(spec.M) * spec.M, fill) {}

  const GridSpec& spec() const { return spec_; }
  int M() const { return spec_.M; }
  double h() const { return spec_.h(); }

  double& operator()(int i, int j) { return values_[static_cast<size_t>(j) * spec_.M + i]; }
  double operator()(int i, int j) const { return values_[static_cast<size_t>(j) * spec_.M + i]; }

  /// Access with periodic wraparound (accepts indices in [-M, 2M)).
  double wrapped(int i, int j) const {
    const int m = spec_.M;
    if (i < 0) i += m; else if (i >= m) i -= m;
    if (j < 0) j += m; else if (j >= m) j -= m;
    return values_[static_cast<size_t>(j) * m + i];
  }

  std::vector<double>& data() { return values_; }
  const std::vector<double>& data() const { return values_; }
  size_t size() const { return values_.size(); }

 private:
  GridSpec spec_;
  std::vector<double> values_;
};

/// 5-point periodic stencil (u_{i+1,j}+u_{i-1,j}+u_{i,j+1}+u_{i,j-1}-4u_ij)/h^2.
GridField laplacian(const GridField& u);

/// Forward-difference gradient with periodic wrap; returns (x, y) components.
std::pair<GridField, GridField> gradient(const GridField& u);

/// Discrete inner product <u,v> = h^2 sum u_ij v_ij. Throws DimensionError
/// on mismatched specs.
double inner(const GridField& u, const GridField& v);

double norm_l2(const GridField& u);
double norm_inf(const GridField& u);
double mean_value(const GridField& u);

/// ||grad_h u||^2 = <grad u, grad u>, fused (no intermediate fields).
double grad_norm_sq(const GridField& u);

/// Throws StepError-free check: raises ParamError naming `what` if any
/// entry is NaN or infinite.
void check_finite(const GridField& u, const char* what);

/// Raw CSV snapshot: M rows of M comma-separated values, row i = y-index i.
void write_csv(const GridField& u, const std::string& path);

/// Binary PGM (P5) snapshot; values affinely mapped from
/// [-display_bound, display_bound] to 0..255 and clamped.
void write_pgm(const GridField& u, const std::string& path, double display_bound);

}  // namespace ac
