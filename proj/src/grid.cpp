#include "bpsv/grid.hpp"

#include <cmath>
#include <string>

#include "bpsv/error.hpp"

namespace bpsv {

void TorusGrid::validate() const {
  if (!(Lx > 0.0) || !(Ly > 0.0) || !std::isfinite(Lx) || !std::isfinite(Ly))
    throw Error(ErrorKind::ValidationError, "torus cell lengths must be positive");
  if (nx < 8 || ny < 8 || nx % 2 != 0 || ny % 2 != 0)
    throw Error(ErrorKind::ValidationError,
                "torus grid counts must be even and >= 8, got " + std::to_string(nx) + "x" +
                    std::to_string(ny));
}

void PlaneGrid::validate() const {
  if (!(R > 0.0) || !std::isfinite(R))
    throw Error(ErrorKind::ValidationError, "plane half-width R must be positive");
  if (n < 16) throw Error(ErrorKind::ValidationError, "plane grid needs n >= 16");
}

bool ScalarField::all_finite() const {
  for (double v : values_)
    if (!std::isfinite(v)) return false;
  return true;
}

}  // namespace bpsv
