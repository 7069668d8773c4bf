#include "bpsv/plane_ops.hpp"

#include <fftw3.h>

#include <cmath>
#include <numbers>

#include "bpsv/kernels.hpp"

namespace bpsv {

void laplacian_plane(const PlaneGrid& grid, const ScalarField& field, ScalarField& out,
                     double boundary) {
  if (!out.same_shape(field)) out = ScalarField(grid);
  const double h = grid.h();
  const double c = 1.0 / (h * h);
  kernels::active().stencil5(field.data(), out.data(), grid.n, grid.n, c, c, boundary);
}

ScalarField laplacian_plane(const PlaneGrid& grid, const ScalarField& field, double boundary) {
  ScalarField out(grid);
  laplacian_plane(grid, field, out, boundary);
  return out;
}

struct DirichletSineSolver::Plan {
  std::size_t m = 0;
  double* buf = nullptr;
  fftw_plan plan = nullptr;

  explicit Plan(std::size_t interior) : m(interior) {
    buf = fftw_alloc_real(m * m);
    const int mi = static_cast<int>(m);
    plan = fftw_plan_r2r_2d(mi, mi, buf, buf, FFTW_RODFT00, FFTW_RODFT00, FFTW_ESTIMATE);
  }
  ~Plan() {
    fftw_destroy_plan(plan);
    fftw_free(buf);
  }
  Plan(const Plan&) = delete;
  Plan& operator=(const Plan&) = delete;
};

DirichletSineSolver::DirichletSineSolver(const PlaneGrid& grid) : grid_(grid) {
  grid_.validate();
  const std::size_t m = grid_.n - 2;
  plan_ = std::make_unique<Plan>(m);
  const double h = grid_.h();
  std::vector<double> s2(m);
  for (std::size_t p = 0; p < m; ++p) {
    const double s = std::sin(std::numbers::pi * static_cast<double>(p + 1) /
                              (2.0 * static_cast<double>(m + 1)));
    s2[p] = 4.0 * s * s / (h * h);
  }
  eig_.resize(m * m);
  for (std::size_t q = 0; q < m; ++q)
    for (std::size_t p = 0; p < m; ++p) eig_[q * m + p] = s2[p] + s2[q];
}

DirichletSineSolver::~DirichletSineSolver() = default;
DirichletSineSolver::DirichletSineSolver(DirichletSineSolver&&) noexcept = default;
DirichletSineSolver& DirichletSineSolver::operator=(DirichletSineSolver&&) noexcept = default;

void DirichletSineSolver::solve_shifted(const ScalarField& rhs, double sigma, ScalarField& out) {
  const std::size_t n = grid_.n;
  const std::size_t m = plan_->m;
  if (sigma != sigma_) {
    // RODFT00 applied twice scales by 2(m+1) per axis.
    const double norm = 4.0 * static_cast<double>(m + 1) * static_cast<double>(m + 1);
    factor_.resize(eig_.size());
    for (std::size_t k = 0; k < eig_.size(); ++k) factor_[k] = 1.0 / ((eig_[k] + sigma) * norm);
    sigma_ = sigma;
  }
  if (!out.same_shape(rhs)) out = ScalarField(grid_);
  double* buf = plan_->buf;
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t i = 0; i < m; ++i) buf[j * m + i] = rhs(i + 1, j + 1);
  fftw_execute(plan_->plan);
  for (std::size_t k = 0; k < m * m; ++k) buf[k] *= factor_[k];
  fftw_execute(plan_->plan);
  for (std::size_t i = 0; i < n; ++i) {
    out(i, 0) = 0.0;
    out(i, n - 1) = 0.0;
    out(0, i) = 0.0;
    out(n - 1, i) = 0.0;
  }
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t i = 0; i < m; ++i) out(i + 1, j + 1) = buf[j * m + i];
}

}  // namespace bpsv
