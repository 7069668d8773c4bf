#pragma once

#include <memory>
#include <vector>

#include "bpsv/grid.hpp"

namespace bpsv {

// FFT plans and wavenumber tables for one TorusGrid. Owned by a single solve;
// not safe for concurrent use.
class SpectralWorkspace {
 public:
  explicit SpectralWorkspace(const TorusGrid& grid);
  ~SpectralWorkspace();
  SpectralWorkspace(SpectralWorkspace&&) noexcept;
  SpectralWorkspace& operator=(SpectralWorkspace&&) noexcept;
  SpectralWorkspace(const SpectralWorkspace&) = delete;
  SpectralWorkspace& operator=(const SpectralWorkspace&) = delete;

  const TorusGrid& grid() const { return grid_; }

  // Multiplication by -|k|^2 in transform space.
  void laplacian(const ScalarField& in, ScalarField& out);

  // Zero-mean U with laplacian(U) = rhs - mean(rhs); the k = 0 coefficient of
  // U is exactly zero. No mean check here; see poisson_solve_zero_mean.
  void inverse_laplacian(const ScalarField& rhs, ScalarField& out);

  // (-Delta + sigma)^{-1}, sigma > 0.
  void solve_shifted(const ScalarField& rhs, double sigma, ScalarField& out);

  // Transform-space evaluation of integral f^2 (Parseval) and of integral |grad f|^2.
  double spectral_l2_squared(const ScalarField& f);
  double gradient_l2_squared(const ScalarField& f);

  // |k|^2 of the half-spectrum slot (kx index i in [0, nx/2], ky index j).
  double wavenumber_squared(std::size_t i, std::size_t j) const;

 private:
  struct Plans;

  void forward(const ScalarField& in);
  void backward(ScalarField& out);
  void apply_factor(const std::vector<double>& factor, const ScalarField& in, ScalarField& out);

  TorusGrid grid_;
  std::size_t nxh_ = 0;
  std::unique_ptr<Plans> plans_;
  std::vector<double> k2_;
  std::vector<double> lap_factor_;
  std::vector<double> inv_lap_factor_;
  std::vector<double> shifted_factor_;
  double shifted_sigma_ = -1.0;
};

ScalarField laplacian_torus(SpectralWorkspace& ws, const ScalarField& field);

// Throws NonZeroMeanRhs when |mean(rhs)| > tol_mean * rms(rhs).
ScalarField poisson_solve_zero_mean(SpectralWorkspace& ws, const ScalarField& rhs,
                                    double tol_mean = 1e-10);

}  // namespace bpsv
