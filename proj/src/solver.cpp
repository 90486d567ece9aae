#include "ac/solver.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "ac/errors.hpp"

namespace ac {

namespace {

// fftw plan creation is not thread-safe; execution with the new-array
// interface is. Plans depend only on M, so they are cached per grid size
// and shared by all operators. Buffers come from fftw_malloc so their
// alignment matches the prototype buffers the plans were created with.
struct PlanSet {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;

  explicit PlanSet(int m) {
    double* rbuf = fftw_alloc_real(static_cast<size_t>(m) * m);
    fftw_complex* cbuf = fftw_alloc_complex(static_cast<size_t>(m) * (m / 2 + 1));
    r2c = fftw_plan_dft_r2c_2d(m, m, rbuf, cbuf, FFTW_ESTIMATE);
    c2r = fftw_plan_dft_c2r_2d(m, m, cbuf, rbuf, FFTW_ESTIMATE);
    fftw_free(cbuf);
    fftw_free(rbuf);
  }
  ~PlanSet() {
    fftw_destroy_plan(r2c);
    fftw_destroy_plan(c2r);
  }
};

const PlanSet& plans_for(int m) {
  static std::mutex mtx;
  static std::map<int, std::unique_ptr<PlanSet>> cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto& slot = cache[m];
  if (!slot) slot = std::make_unique<PlanSet>(m);
  return *slot;
}

// sin^2(pi p / M) table, shared across the many per-step operator rebuilds.
const std::vector<double>& sin2_table(int m) {
  static std::mutex mtx;
  static std::map<int, std::vector<double>> cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto& t = cache[m];
  if (t.empty()) {
    t.resize(m);
    for (int p = 0; p < m; ++p) {
      const double s = std::sin(std::numbers::pi * p / m);
      t[p] = s * s;
    }
  }
  return t;
}

struct FftwDeleter {
  void operator()(void* p) const { fftw_free(p); }
};

}  // namespace

HelmholtzOperator::HelmholtzOperator(GridSpec spec, double a, double eps2)
    : spec_(spec), a_(a), eps2_(eps2) {
  if (!(a > 0.0)) throw ParamError("HelmholtzOperator: a must be positive");
  const int m = spec.M;
  const int mc = m / 2 + 1;
  const double h = spec.h();
  const double c = 4.0 / (h * h);
  const std::vector<double>& s2 = sin2_table(m);
  symbol_.resize(static_cast<size_t>(m) * mc);
  for (int q = 0; q < m; ++q) {
    for (int p = 0; p < mc; ++p) {
      const double lambda = -c * (s2[p] + s2[q]);
      symbol_[static_cast<size_t>(q) * mc + p] = a - eps2 * lambda;
    }
  }
  plans_for(m);  // build plans up front
}

GridField HelmholtzOperator::solve(const GridField& rhs) const {
  if (!(rhs.spec() == spec_)) throw DimensionError("solve: grid spec mismatch");
  const int m = spec_.M;
  const int mc = m / 2 + 1;
  const PlanSet& plans = plans_for(m);

  std::unique_ptr<double, FftwDeleter> rbuf(fftw_alloc_real(static_cast<size_t>(m) * m));
  std::unique_ptr<fftw_complex, FftwDeleter> cbuf(
      fftw_alloc_complex(static_cast<size_t>(m) * mc));

  std::copy(rhs.data().begin(), rhs.data().end(), rbuf.get());
  fftw_execute_dft_r2c(plans.r2c, rbuf.get(), cbuf.get());

  const double scale = 1.0 / (static_cast<double>(m) * m);  // fftw is unnormalized
  for (size_t k = 0; k < symbol_.size(); ++k) {
    const double w = scale / symbol_[k];
    cbuf.get()[k][0] *= w;
    cbuf.get()[k][1] *= w;
  }
  fftw_execute_dft_c2r(plans.c2r, cbuf.get(), rbuf.get());

  GridField u(spec_);
  std::copy(rbuf.get(), rbuf.get() + u.size(), u.data().begin());
  check_finite(u, "helmholtz solve output");
  return u;
}

GridField HelmholtzOperator::apply(const GridField& u) const {
  if (!(u.spec() == spec_)) throw DimensionError("apply: grid spec mismatch");
  GridField lap = laplacian(u);
  GridField out(spec_);
  for (size_t k = 0; k < out.size(); ++k) {
    out.data()[k] = a_ * u.data()[k] - eps2_ * lap.data()[k];
  }
  return out;
}

}  // namespace ac
