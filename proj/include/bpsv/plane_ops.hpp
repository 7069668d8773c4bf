#pragma once

#include <memory>
#include <vector>

#include "bpsv/grid.hpp"

namespace bpsv {

// Five-point Laplacian with constant Dirichlet value `boundary` on the outer
// ring. Output is zero on the ring.
ScalarField laplacian_plane(const PlaneGrid& grid, const ScalarField& field, double boundary = 0.0);
void laplacian_plane(const PlaneGrid& grid, const ScalarField& field, ScalarField& out,
                     double boundary = 0.0);

// Exact inverse of (-Delta_h + sigma) on the interior nodes with homogeneous
// Dirichlet data, by a type-I discrete sine transform.
class DirichletSineSolver {
 public:
  explicit DirichletSineSolver(const PlaneGrid& grid);
  ~DirichletSineSolver();
  DirichletSineSolver(DirichletSineSolver&&) noexcept;
  DirichletSineSolver& operator=(DirichletSineSolver&&) noexcept;
  DirichletSineSolver(const DirichletSineSolver&) = delete;
  DirichletSineSolver& operator=(const DirichletSineSolver&) = delete;

  // Ring entries of rhs are ignored; ring entries of out are zero.
  void solve_shifted(const ScalarField& rhs, double sigma, ScalarField& out);

 private:
  struct Plan;
  PlaneGrid grid_;
  std::unique_ptr<Plan> plan_;
  std::vector<double> eig_;  // eigenvalues of -Delta_h, interior N*N
  std::vector<double> factor_;
  double sigma_ = -1.0;
};

}  // namespace bpsv
