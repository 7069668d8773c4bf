#pragma once

#include <memory>

#include "bpsv/discretization.hpp"
#include "bpsv/problem.hpp"

namespace bpsv {

struct Variant {
  Geometry geometry = Geometry::Torus;
  Model model = Model::Base;
  friend bool operator==(const Variant&, const Variant&) = default;
};

// The two unknowns. Base model: (u, f = u + w). Extended model: (g, f) with
// g = w1 stored in `u` and f = w1 + w2.
struct StatePair {
  ScalarField u;
  ScalarField f;

  static StatePair zeros(std::size_t nx, std::size_t ny) {
    return {ScalarField(nx, ny), ScalarField(nx, ny)};
  }
};

struct EnergyBreakdown {
  double total = 0.0;
  double gradient_part = 0.0;
  double exponential_part = 0.0;
  double linear_part = 0.0;
};

// All four strictly convex action functionals share one form:
//
//   E(u, f) = s * ( 1/2 |grad u|^2 + 1/4 |grad f|^2 )
//           + k * integral [ 2 A (e^u - d) + B (e^(f-u) - d) ]
//           + integral [ c_u u + c_f f ]
//
// torus (either model, extended scaled by lambda): s = 1, k = lambda, d = 0,
//   c_u = 4 pi m/|Omega| - lambda, c_f = 2 pi (m+n)/|Omega| - lambda;
// plane: s = 1/lambda, k = 1, d = 1, c_u = h1/lambda - 1,
//   c_f = (h1 + h2)/(2 lambda) - 1;
// with A = e^{u0} (1 in the base model) and B = e^{v0}. The base model is the
// extended one with m = 0, evaluated through the same code path.
//
// Gradients are taken in the L2 pairing of the grid's quadrature, so a zero
// gradient is exactly the discrete Euler-Lagrange system.
class Functional {
 public:
  Functional(Variant variant, std::shared_ptr<Discretization> disc, const Background& bg,
             const VortexConfig& cfg, const PhysicalParams& params);

  const Variant& variant() const { return variant_; }
  Discretization& disc() const { return *disc_; }
  const PhysicalParams& params() const { return params_; }
  double quad_scale() const { return s_; }

  EnergyBreakdown energy(const StatePair& st) const;
  StatePair gradient(const StatePair& st) const;
  StatePair hessian_apply(const StatePair& st, const StatePair& dir) const;

  // Pointwise Hessian coefficients a = k(2Ae^u + B e^(f-u)), b = k B e^(f-u),
  // cached once per Newton step.
  struct Curvature {
    ScalarField a;
    ScalarField b;
  };
  Curvature curvature(const StatePair& st) const;
  StatePair hessian_apply(const Curvature& c, const StatePair& dir) const;

  // Block-diagonal constant-coefficient preconditioner:
  // diag(s(-Lap + sigma), (s/2)(-Lap + sigma))^{-1} with sigma = lambda.
  StatePair precondition(const StatePair& r) const;

  double inner(const StatePair& a, const StatePair& b) const;
  double sup_norm(const StatePair& a) const;

  // E(st + alpha dir) - E(st) evaluated term by term with expm1 and exact
  // quadratic expansion, so small decreases are not lost to cancellation.
  class LineModel {
   public:
    double change(double alpha) const;

   private:
    friend class Functional;
    const Functional* fn_ = nullptr;
    const StatePair* st_ = nullptr;
    const StatePair* dir_ = nullptr;
    double u_ldu_ = 0.0, du_ldu_ = 0.0, f_ldf_ = 0.0, df_ldf_ = 0.0, lin_ = 0.0;
    ScalarField eu_, ee_;
    double max_u_ = 0.0, max_du_ = 0.0, max_diff_ = 0.0, max_ddiff_ = 0.0;
  };
  LineModel line_model(const StatePair& st, const StatePair& dir) const;

  // Node-wise 2 A e^u and B e^(f-u) with the overflow guard (exponent > 700).
  void exponentials(const StatePair& st, ScalarField& two_a_eu, ScalarField& b_efu) const;

  const ScalarField& A() const { return A_; }
  const ScalarField& B() const { return B_; }

 private:
  Variant variant_;
  std::shared_ptr<Discretization> disc_;
  PhysicalParams params_;
  double s_ = 1.0;
  double k_ = 1.0;
  double d_ = 0.0;
  ScalarField A_, B_, cu_, cf_;
};

inline constexpr double kExponentGuard = 700.0;

// Named entry points for the four variants.
EnergyBreakdown energy_torus_base(const Functional& fn, const StatePair& st);
StatePair gradient_torus_base(const Functional& fn, const StatePair& st);
StatePair hessian_apply_torus_base(const Functional& fn, const StatePair& st, const StatePair& dir);
EnergyBreakdown energy_plane_base(const Functional& fn, const StatePair& st);
StatePair gradient_plane_base(const Functional& fn, const StatePair& st);
StatePair hessian_apply_plane_base(const Functional& fn, const StatePair& st, const StatePair& dir);
EnergyBreakdown energy_torus_extended(const Functional& fn, const StatePair& st);
StatePair gradient_torus_extended(const Functional& fn, const StatePair& st);
StatePair hessian_apply_torus_extended(const Functional& fn, const StatePair& st,
                                       const StatePair& dir);
EnergyBreakdown energy_plane_extended(const Functional& fn, const StatePair& st);
StatePair gradient_plane_extended(const Functional& fn, const StatePair& st);
StatePair hessian_apply_plane_extended(const Functional& fn, const StatePair& st,
                                       const StatePair& dir);

}  // namespace bpsv
