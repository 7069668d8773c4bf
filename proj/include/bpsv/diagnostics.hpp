#pragma once

#include <optional>
#include <vector>

#include "bpsv/newton.hpp"

namespace bpsv {

struct EquationResidual {
  double l2 = 0.0;
  double sup = 0.0;
};

// Residuals of the two Euler-Lagrange equations in PDE form (Lap u - rhs,
// Lap f - rhs), interior nodes only on the plane.
struct ResidualReport {
  EquationResidual first;
  EquationResidual second;
};

struct FluxReport {
  double flux_a = 0.0;  // integral of a12
  double flux_b = 0.0;  // integral of b12
};

struct BoundReport {
  double eu_excess = 0.0;            // max e^u - 1
  double ev_excess = 0.0;            // max e^v - 1
  double intermediate_excess = 0.0;  // max of 2e^u - max e^v - 1
  double eps = 0.05;
  bool violated = false;
};

struct ConstraintErrors {
  double first = 0.0;   // |int B e^(f-u) - C1| / C1 (alpha1 when extended)
  double second = 0.0;  // |int A e^u - C2| / C2 (alpha2 when extended)
};

struct LagrangeFit {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
};

struct DecayFit {
  double rate_fields = 0.0;     // minus the slope of ln(u^2 + v^2)
  double rate_gradients = 0.0;  // minus the slope of ln(|grad u|^2 + |grad v|^2)
  double r_min = 0.0;
  double r_max = 0.0;
  std::size_t bins = 0;
};

struct RadialBin {
  double r = 0.0;
  double mean_u2v2 = 0.0;
  double mean_grad2 = 0.0;
  std::size_t count = 0;
};

struct PhysicalFields {
  ScalarField kappa;
  ScalarField phi_abs;
  ScalarField u;  // ln kappa^2
  ScalarField v;  // ln |phi|^2
  ScalarField a12;
  ScalarField b12;
  // Largest gap between the algebraic and second-difference forms of a12 and
  // b12 outside the core disks (radius 3 sqrt(tau)) and off the boundary.
  double a12_derivative_gap = 0.0;
  double b12_derivative_gap = 0.0;
};

struct DiagnosticsReport {
  ResidualReport residual;
  FluxReport flux;
  std::optional<ConstraintErrors> constraints;  // torus
  std::optional<BoundReport> bounds;            // every variant; asserted only for torus base
  std::optional<LagrangeFit> lagrange;          // torus base
  std::optional<DecayFit> decay;                // plane
  std::optional<double> uniqueness_spread;
};

ResidualReport pde_residual(const Problem& pb, const Assembled& a, const StatePair& st);
FluxReport flux_report(const Problem& pb, const Assembled& a, const StatePair& st);
BoundReport pointwise_bounds(const Assembled& a, const StatePair& st, double eps = 0.05);
ConstraintErrors constraint_errors(const Problem& pb, const Assembled& a, const StatePair& st);
LagrangeFit verify_lagrange_multipliers(const Problem& pb, const Assembled& a, const StatePair& st);

// Angular averages over rings of width dr (default 2h) centred at the origin.
std::vector<RadialBin> radial_profile(const PlaneGrid& grid, const Assembled& a,
                                      const StatePair& st, double dr = 0.0);

// Log-linear fit over [r_min, r_max]; r_min defaults to max |p| + 3/sqrt(lambda)
// and r_max to R/2. Throws AnnulusTooThin below 8 populated bins.
DecayFit decay_fit(const Problem& pb, const Assembled& a, const StatePair& st,
                   std::optional<double> r_min = std::nullopt,
                   std::optional<double> r_max = std::nullopt);

PhysicalFields reconstruct_physical(const Problem& pb, const Assembled& a, const StatePair& st);

// Largest pairwise sup difference between solves started from `seeds` random
// smooth states; also returns the sup of the first solution.
struct UniquenessResult {
  double spread = 0.0;
  double solution_sup = 0.0;
};
UniquenessResult uniqueness_probe(const Problem& pb, int seeds, const SolverSettings& settings,
                                  unsigned long long base_seed = 1);

DiagnosticsReport run_diagnostics(const Problem& pb, const Assembled& a, const StatePair& st);

}  // namespace bpsv
