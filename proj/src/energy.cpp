#include "bpsv/energy.hpp"

#include <cassert>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "bpsv/error.hpp"
#include "bpsv/field_ops.hpp"
#include "bpsv/kernels.hpp"

namespace bpsv {
namespace {

constexpr double kPi = std::numbers::pi;

void require_variant(const Functional& fn, Geometry g, Model m) {
  if (fn.variant() != Variant{g, m})
    throw Error(ErrorKind::Unsupported, "functional variant does not match the requested entry point");
}

}  // namespace

Functional::Functional(Variant variant, std::shared_ptr<Discretization> disc, const Background& bg,
                       const VortexConfig& cfg, const PhysicalParams& params)
    : variant_(variant), disc_(std::move(disc)), params_(params) {
  assert(disc_ && disc_->geometry() == variant_.geometry);
  const double lam = params_.lambda;
  const double n = static_cast<double>(cfg.n());
  const double m = variant_.model == Model::Extended ? static_cast<double>(cfg.m()) : 0.0;
  const std::size_t N = disc_->size();

  B_ = bg.exp_v0;
  A_ = variant_.model == Model::Extended ? bg.exp_u0 : disc_->make_field(1.0);
  cu_ = disc_->make_field();
  cf_ = disc_->make_field();

  if (variant_.geometry == Geometry::Torus) {
    s_ = 1.0;
    k_ = lam;
    d_ = 0.0;
    const double area = disc_->area();
    const double cu = 4.0 * kPi * m / area - lam;
    const double cf = 2.0 * kPi * (m + n) / area - lam;
    for (std::size_t i = 0; i < N; ++i) {
      cu_[i] = cu;
      cf_[i] = cf;
    }
  } else {
    s_ = 1.0 / lam;
    k_ = 1.0;
    d_ = 1.0;
    const bool ext = variant_.model == Model::Extended;
    for (std::size_t i = 0; i < N; ++i) {
      const double h1 = ext ? bg.h1[i] : 0.0;
      const double h2 = bg.h2[i];
      cu_[i] = h1 / lam - 1.0;
      cf_[i] = (h1 + h2) / (2.0 * lam) - 1.0;
    }
  }
}

void Functional::exponentials(const StatePair& st, ScalarField& two_a_eu, ScalarField& b_efu) const {
  const std::size_t N = disc_->size();
  const auto& k = kernels::active();
  ScalarField diff = disc_->make_field();
  for (std::size_t i = 0; i < N; ++i) diff[i] = st.f[i] - st.u[i];
  const double mu = k.max_value(st.u.data(), N);
  const double md = k.max_value(diff.data(), N);
  if (!(mu <= kExponentGuard) || !(md <= kExponentGuard)) {
    std::ostringstream msg;
    msg << "exponent argument exceeds " << kExponentGuard << " (max u = " << mu
        << ", max f - u = " << md << ")";
    throw Error(ErrorKind::Overflow, msg.str());
  }
  if (!two_a_eu.same_shape(st.u)) two_a_eu = disc_->make_field();
  if (!b_efu.same_shape(st.u)) b_efu = disc_->make_field();
  k.exp_scaled(st.u.data(), A_.data(), two_a_eu.data(), N);
  for (std::size_t i = 0; i < N; ++i) two_a_eu[i] *= 2.0;
  k.exp_scaled(diff.data(), B_.data(), b_efu.data(), N);
}

EnergyBreakdown Functional::energy(const StatePair& st) const {
  ScalarField eu2, ee;
  exponentials(st, eu2, ee);
  const std::size_t N = disc_->size();
  ScalarField lu = disc_->make_field();
  ScalarField lf = disc_->make_field();
  disc_->laplacian(st.u, lu);
  disc_->laplacian(st.f, lf);

  EnergyBreakdown e;
  e.gradient_part = s_ * (-0.5 * disc_->inner(st.u, lu) - 0.25 * disc_->inner(st.f, lf));

  ScalarField dens = disc_->make_field();
  if (d_ == 0.0) {
    for (std::size_t i = 0; i < N; ++i) dens[i] = eu2[i] + ee[i];
  } else {
    // Relative to the vacuum: 2A(e^u - 1) + B(e^(f-u) - 1).
    for (std::size_t i = 0; i < N; ++i)
      dens[i] = 2.0 * A_[i] * std::expm1(st.u[i]) + B_[i] * std::expm1(st.f[i] - st.u[i]);
  }
  e.exponential_part = k_ * disc_->integrate(dens);

  for (std::size_t i = 0; i < N; ++i) dens[i] = cu_[i] * st.u[i] + cf_[i] * st.f[i];
  e.linear_part = disc_->integrate(dens);
  e.total = e.gradient_part + e.exponential_part + e.linear_part;
  return e;
}

StatePair Functional::gradient(const StatePair& st) const {
  ScalarField eu2, ee;
  exponentials(st, eu2, ee);
  const std::size_t N = disc_->size();
  StatePair g = StatePair::zeros(disc_->nx(), disc_->ny());
  disc_->laplacian(st.u, g.u);
  disc_->laplacian(st.f, g.f);
  const double hs = 0.5 * s_;
  for (std::size_t i = 0; i < N; ++i) {
    g.u[i] = (k_ * (eu2[i] - ee[i]) + cu_[i]) - s_ * g.u[i];
    g.f[i] = (k_ * ee[i] + cf_[i]) - hs * g.f[i];
  }
  disc_->clamp_fixed(g.u);
  disc_->clamp_fixed(g.f);
  return g;
}

Functional::Curvature Functional::curvature(const StatePair& st) const {
  ScalarField eu2, ee;
  exponentials(st, eu2, ee);
  Curvature c{disc_->make_field(), disc_->make_field()};
  for (std::size_t i = 0; i < disc_->size(); ++i) {
    c.a[i] = k_ * (eu2[i] + ee[i]);
    c.b[i] = k_ * ee[i];
  }
  return c;
}

StatePair Functional::hessian_apply(const Curvature& c, const StatePair& dir) const {
  StatePair out = StatePair::zeros(disc_->nx(), disc_->ny());
  ScalarField ldu = disc_->make_field();
  ScalarField ldf = disc_->make_field();
  disc_->laplacian(dir.u, ldu);
  disc_->laplacian(dir.f, ldf);
  kernels::active().hessian_combine(s_, ldu.data(), ldf.data(), dir.u.data(), dir.f.data(),
                                    c.a.data(), c.b.data(), out.u.data(), out.f.data(),
                                    disc_->size());
  disc_->clamp_fixed(out.u);
  disc_->clamp_fixed(out.f);
  return out;
}

StatePair Functional::hessian_apply(const StatePair& st, const StatePair& dir) const {
  return hessian_apply(curvature(st), dir);
}

StatePair Functional::precondition(const StatePair& r) const {
  StatePair z = StatePair::zeros(disc_->nx(), disc_->ny());
  const double sigma = params_.lambda;
  disc_->solve_shifted(r.u, sigma, z.u);
  disc_->solve_shifted(r.f, sigma, z.f);
  const double su = 1.0 / s_;
  const double sf = 2.0 / s_;
  for (std::size_t i = 0; i < disc_->size(); ++i) {
    z.u[i] *= su;
    z.f[i] *= sf;
  }
  disc_->clamp_fixed(z.u);
  disc_->clamp_fixed(z.f);
  return z;
}

double Functional::inner(const StatePair& a, const StatePair& b) const {
  return disc_->inner(a.u, b.u) + disc_->inner(a.f, b.f);
}

double Functional::sup_norm(const StatePair& a) const { return std::max(norm_sup(a.u), norm_sup(a.f)); }

Functional::LineModel Functional::line_model(const StatePair& st, const StatePair& dir) const {
  LineModel lm;
  lm.fn_ = this;
  lm.st_ = &st;
  lm.dir_ = &dir;
  exponentials(st, lm.eu_, lm.ee_);
  ScalarField ldu = disc_->make_field();
  ScalarField ldf = disc_->make_field();
  disc_->laplacian(dir.u, ldu);
  disc_->laplacian(dir.f, ldf);
  lm.u_ldu_ = disc_->inner(st.u, ldu);
  lm.du_ldu_ = disc_->inner(dir.u, ldu);
  lm.f_ldf_ = disc_->inner(st.f, ldf);
  lm.df_ldf_ = disc_->inner(dir.f, ldf);
  ScalarField lin = disc_->make_field();
  for (std::size_t i = 0; i < disc_->size(); ++i) lin[i] = cu_[i] * dir.u[i] + cf_[i] * dir.f[i];
  lm.lin_ = disc_->integrate(lin);
  return lm;
}

double Functional::LineModel::change(double alpha) const {
  const Functional& fn = *fn_;
  const StatePair& st = *st_;
  const StatePair& dir = *dir_;
  const std::size_t N = fn.disc_->size();
  ScalarField dens = fn.disc_->make_field();
  for (std::size_t i = 0; i < N; ++i) {
    const double du = dir.u[i];
    const double dd = dir.f[i] - du;
    if (st.u[i] + alpha * du > kExponentGuard ||
        (st.f[i] - st.u[i]) + alpha * dd > kExponentGuard)
      return std::numeric_limits<double>::infinity();
    dens[i] = eu_[i] * std::expm1(alpha * du) + ee_[i] * std::expm1(alpha * dd);
  }
  const double quad = fn.s_ * (-(alpha * u_ldu_ + 0.5 * alpha * alpha * du_ldu_) -
                               0.5 * (alpha * f_ldf_ + 0.5 * alpha * alpha * df_ldf_));
  return quad + fn.k_ * fn.disc_->integrate(dens) + alpha * lin_;
}

EnergyBreakdown energy_torus_base(const Functional& fn, const StatePair& st) {
  require_variant(fn, Geometry::Torus, Model::Base);
  return fn.energy(st);
}
StatePair gradient_torus_base(const Functional& fn, const StatePair& st) {
  require_variant(fn, Geometry::Torus, Model::Base);
  return fn.gradient(st);
}
StatePair hessian_apply_torus_base(const Functional& fn, const StatePair& st, const StatePair& dir) {
  require_variant(fn, Geometry::Torus, Model::Base);
  return fn.hessian_apply(st, dir);
}
EnergyBreakdown energy_plane_base(const Functional& fn, const StatePair& st) {
  require_variant(fn, Geometry::Plane, Model::Base);
  return fn.energy(st);
}
StatePair gradient_plane_base(const Functional& fn, const StatePair& st) {
  require_variant(fn, Geometry::Plane, Model::Base);
  return fn.gradient(st);
}
StatePair hessian_apply_plane_base(const Functional& fn, const StatePair& st, const StatePair& dir) {
  require_variant(fn, Geometry::Plane, Model::Base);
  return fn.hessian_apply(st, dir);
}
EnergyBreakdown energy_torus_extended(const Functional& fn, const StatePair& st) {
  require_variant(fn, Geometry::Torus, Model::Extended);
  return fn.energy(st);
}
StatePair gradient_torus_extended(const Functional& fn, const StatePair& st) {
  require_variant(fn, Geometry::Torus, Model::Extended);
  return fn.gradient(st);
}
StatePair hessian_apply_torus_extended(const Functional& fn, const StatePair& st,
                                       const StatePair& dir) {
  require_variant(fn, Geometry::Torus, Model::Extended);
  return fn.hessian_apply(st, dir);
}
EnergyBreakdown energy_plane_extended(const Functional& fn, const StatePair& st) {
  require_variant(fn, Geometry::Plane, Model::Extended);
  return fn.energy(st);
}
StatePair gradient_plane_extended(const Functional& fn, const StatePair& st) {
  require_variant(fn, Geometry::Plane, Model::Extended);
  return fn.gradient(st);
}
StatePair hessian_apply_plane_extended(const Functional& fn, const StatePair& st,
                                       const StatePair& dir) {
  require_variant(fn, Geometry::Plane, Model::Extended);
  return fn.hessian_apply(st, dir);
}

}  // namespace bpsv
