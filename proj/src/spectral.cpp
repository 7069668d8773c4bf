#include "bpsv/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "bpsv/error.hpp"
#include "bpsv/field_ops.hpp"
#include "bpsv/kernels.hpp"

namespace bpsv {

// Buffers come from fftw_malloc so FFTW always sees the same alignment; with
// FFTW_ESTIMATE this keeps transforms bit-reproducible run to run.
struct SpectralWorkspace::Plans {
  double* real = nullptr;
  fftw_complex* spec = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;

  Plans(std::size_t nx, std::size_t ny) {
    const std::size_t nxh = nx / 2 + 1;
    real = fftw_alloc_real(nx * ny);
    spec = fftw_alloc_complex(nxh * ny);
    fwd = fftw_plan_dft_r2c_2d(static_cast<int>(ny), static_cast<int>(nx), real, spec, FFTW_ESTIMATE);
    bwd = fftw_plan_dft_c2r_2d(static_cast<int>(ny), static_cast<int>(nx), spec, real, FFTW_ESTIMATE);
  }
  ~Plans() {
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);
    fftw_free(real);
    fftw_free(spec);
  }
  Plans(const Plans&) = delete;
  Plans& operator=(const Plans&) = delete;
};

SpectralWorkspace::SpectralWorkspace(const TorusGrid& grid) : grid_(grid) {
  grid_.validate();
  nxh_ = grid_.nx / 2 + 1;
  plans_ = std::make_unique<Plans>(grid_.nx, grid_.ny);
  const std::size_t nspec = nxh_ * grid_.ny;
  const double inv_n = 1.0 / static_cast<double>(grid_.size());
  k2_.resize(nspec);
  lap_factor_.resize(nspec);
  inv_lap_factor_.resize(nspec);
  for (std::size_t j = 0; j < grid_.ny; ++j) {
    for (std::size_t i = 0; i < nxh_; ++i) {
      const std::size_t k = j * nxh_ + i;
      k2_[k] = wavenumber_squared(i, j);
      lap_factor_[k] = -k2_[k] * inv_n;
      inv_lap_factor_[k] = (k == 0) ? 0.0 : -inv_n / k2_[k];
    }
  }
}

SpectralWorkspace::~SpectralWorkspace() = default;
SpectralWorkspace::SpectralWorkspace(SpectralWorkspace&&) noexcept = default;
SpectralWorkspace& SpectralWorkspace::operator=(SpectralWorkspace&&) noexcept = default;

double SpectralWorkspace::wavenumber_squared(std::size_t i, std::size_t j) const {
  const double two_pi = 2.0 * std::numbers::pi;
  const double kx = two_pi * static_cast<double>(i) / grid_.Lx;
  const long jj = (j <= grid_.ny / 2) ? static_cast<long>(j)
                                      : static_cast<long>(j) - static_cast<long>(grid_.ny);
  const double ky = two_pi * static_cast<double>(jj) / grid_.Ly;
  return kx * kx + ky * ky;
}

void SpectralWorkspace::forward(const ScalarField& in) {
  std::copy(in.data(), in.data() + in.size(), plans_->real);
  fftw_execute(plans_->fwd);
}

void SpectralWorkspace::backward(ScalarField& out) {
  fftw_execute(plans_->bwd);
  std::copy(plans_->real, plans_->real + grid_.size(), out.data());
}

void SpectralWorkspace::apply_factor(const std::vector<double>& factor, const ScalarField& in,
                                     ScalarField& out) {
  if (!out.same_shape(in)) out = ScalarField(grid_);
  forward(in);
  kernels::active().scale_spectrum(reinterpret_cast<double*>(plans_->spec), factor.data(),
                                   factor.size());
  backward(out);
}

void SpectralWorkspace::laplacian(const ScalarField& in, ScalarField& out) {
  apply_factor(lap_factor_, in, out);
}

void SpectralWorkspace::inverse_laplacian(const ScalarField& rhs, ScalarField& out) {
  apply_factor(inv_lap_factor_, rhs, out);
}

void SpectralWorkspace::solve_shifted(const ScalarField& rhs, double sigma, ScalarField& out) {
  if (sigma != shifted_sigma_) {
    const double inv_n = 1.0 / static_cast<double>(grid_.size());
    shifted_factor_.resize(k2_.size());
    for (std::size_t k = 0; k < k2_.size(); ++k) shifted_factor_[k] = inv_n / (k2_[k] + sigma);
    shifted_sigma_ = sigma;
  }
  apply_factor(shifted_factor_, rhs, out);
}

double SpectralWorkspace::spectral_l2_squared(const ScalarField& f) {
  forward(f);
  // Half spectrum: interior kx columns stand for two conjugate modes.
  double total = 0.0;
  for (std::size_t j = 0; j < grid_.ny; ++j) {
    for (std::size_t i = 0; i < nxh_; ++i) {
      const fftw_complex& c = plans_->spec[j * nxh_ + i];
      const double w = (i == 0 || 2 * i == grid_.nx) ? 1.0 : 2.0;
      total += w * (c[0] * c[0] + c[1] * c[1]);
    }
  }
  return total * grid_.cell() / static_cast<double>(grid_.size());
}

double SpectralWorkspace::gradient_l2_squared(const ScalarField& f) {
  forward(f);
  double total = 0.0;
  for (std::size_t j = 0; j < grid_.ny; ++j) {
    for (std::size_t i = 0; i < nxh_; ++i) {
      const std::size_t k = j * nxh_ + i;
      const fftw_complex& c = plans_->spec[k];
      const double w = (i == 0 || 2 * i == grid_.nx) ? 1.0 : 2.0;
      total += w * k2_[k] * (c[0] * c[0] + c[1] * c[1]);
    }
  }
  return total * grid_.cell() / static_cast<double>(grid_.size());
}

ScalarField laplacian_torus(SpectralWorkspace& ws, const ScalarField& field) {
  ScalarField out(ws.grid());
  ws.laplacian(field, out);
  return out;
}

ScalarField poisson_solve_zero_mean(SpectralWorkspace& ws, const ScalarField& rhs, double tol_mean) {
  const TorusGrid& g = ws.grid();
  const double m = mean(g, rhs);
  const double rms = norm_l2(g, rhs) / std::sqrt(g.area());
  if (std::fabs(m) > tol_mean * rms) {
    std::ostringstream msg;
    msg << "right-hand side mean " << m << " exceeds " << tol_mean << " x rms " << rms;
    throw Error(ErrorKind::NonZeroMeanRhs, msg.str());
  }
  ScalarField out(g);
  ws.inverse_laplacian(rhs, out);
  return out;
}

}  // namespace bpsv
