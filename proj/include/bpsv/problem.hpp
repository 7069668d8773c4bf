#pragma once

#include <vector>

#include "bpsv/grid.hpp"

namespace bpsv {

enum class Model { Base, Extended };
enum class Geometry { Plane, Torus };

struct PhysicalParams {
  double lambda = 1.0;  // coupling, lambda = 4 rho^2
  double tau = 1.0;     // core scale of the background profile
};

// Default core scale: (3 h)^2 with h the coarsest grid spacing.
double default_tau(const TorusGrid& g);
double default_tau(const PlaneGrid& g);

// Zeros of phi (n points) and of kappa (m points). Repeated points encode
// multiplicity.
struct VortexConfig {
  std::vector<Point> phi_zeros;
  std::vector<Point> kappa_zeros;

  std::size_t n() const { return phi_zeros.size(); }
  std::size_t m() const { return kappa_zeros.size(); }
};

// For the base model alpha1 == C1 and alpha2 == C2; both names are filled in
// either case.
struct ThresholdReport {
  Model model = Model::Base;
  double C1 = 0.0;
  double C2 = 0.0;
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  bool first_ok = false;   // 2 pi (m + n) < lambda |Omega|
  bool second_ok = false;  // pi (3m + n) < lambda |Omega|
  bool solvable = false;
  double margin = 0.0;     // smallest of the required constants
};

// Never throws. Each constant is formed as (lambda |Omega| - c) / lambda so
// its sign is exactly the sign of the strict inequality it encodes.
ThresholdReport check_existence(const VortexConfig& cfg, const TorusGrid& domain,
                                const PhysicalParams& params, Model model);
ThresholdReport check_existence(const VortexConfig& cfg, const TorusGrid& domain,
                                const PhysicalParams& params);

struct Background {
  ScalarField exp_v0;
  ScalarField exp_u0;  // identically 1 without kappa zeros
  ScalarField v0;
  ScalarField u0;
  ScalarField h;   // plane: phi source density (equals h2)
  ScalarField h1;  // plane: kappa source density
  ScalarField h2;
  ScalarField neutralized_source;        // torus: regularized phi sources minus 4 pi n / |Omega|
  ScalarField neutralized_source_kappa;  // torus: same for kappa zeros
};

// Closed-form plane background; exp_v0 vanishes exactly at each zero and the
// log fields are floored at -700.
Background build_background_plane(const VortexConfig& cfg, const PlaneGrid& grid,
                                  const PhysicalParams& params);

// Torus background from the periodized core profile, renormalized so each
// zero carries exactly 4 pi, and a zero-mean Poisson solve.
Background build_background_torus(const VortexConfig& cfg, const TorusGrid& grid,
                                  const PhysicalParams& params);

// One periodized, renormalized core profile (cell integral 4 pi); exposed for tests.
ScalarField periodized_core(const TorusGrid& grid, const Point& p, double tau);

inline constexpr double kLogFloor = -700.0;

}  // namespace bpsv
