#include "bpsv/discretization.hpp"

#include "bpsv/field_ops.hpp"

namespace bpsv {

double TorusDiscretization::integrate(const ScalarField& f) const { return bpsv::integrate(grid_, f); }

double TorusDiscretization::inner(const ScalarField& a, const ScalarField& b) const {
  return inner_product(grid_, a, b);
}

void PlaneDiscretization::laplacian(const ScalarField& in, ScalarField& out) {
  laplacian_plane(grid_, in, out, 0.0);
}

double PlaneDiscretization::integrate(const ScalarField& f) const { return bpsv::integrate(grid_, f); }

double PlaneDiscretization::inner(const ScalarField& a, const ScalarField& b) const {
  return inner_product(grid_, a, b);
}

void PlaneDiscretization::clamp_fixed(ScalarField& f) const {
  const std::size_t n = grid_.n;
  for (std::size_t i = 0; i < n; ++i) {
    f(i, 0) = 0.0;
    f(i, n - 1) = 0.0;
    f(0, i) = 0.0;
    f(n - 1, i) = 0.0;
  }
}

std::unique_ptr<Discretization> make_discretization(const AnyGrid& grid) {
  if (const auto* t = std::get_if<TorusGrid>(&grid)) return std::make_unique<TorusDiscretization>(*t);
  return std::make_unique<PlaneDiscretization>(std::get<PlaneGrid>(grid));
}

}  // namespace bpsv
