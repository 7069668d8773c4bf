#include "bpsv/diagnostics.hpp"

#include <algorithm>
#include <functional>
#include <cmath>
#include <numbers>
#include <sstream>

#include "bpsv/error.hpp"
#include "bpsv/field_ops.hpp"

namespace bpsv {
namespace {

constexpr double kPi = std::numbers::pi;

bool on_torus(const Problem& pb) { return std::holds_alternative<TorusGrid>(pb.grid); }

// Node-wise A e^u and B e^(f-u) with plain std::exp, independent of the
// solver's kernels.
void densities(const Assembled& a, const StatePair& st, ScalarField& aeu, ScalarField& befu) {
  const ScalarField& A = a.functional->A();
  const ScalarField& B = a.functional->B();
  aeu = ScalarField(st.u.nx(), st.u.ny());
  befu = aeu;
  for (std::size_t k = 0; k < st.u.size(); ++k) {
    aeu[k] = A[k] * std::exp(st.u[k]);
    befu[k] = B[k] * std::exp(st.f[k] - st.u[k]);
  }
}

// Constant source terms of the two equations: U in Lap u, F in Lap f.
struct Sources {
  ScalarField U, F;
};

Sources sources(const Problem& pb, const Assembled& a) {
  const Discretization& d = *a.disc;
  Sources s{d.make_field(), d.make_field()};
  if (on_torus(pb)) {
    const double area = d.area();
    const double m = static_cast<double>(pb.variant.model == Model::Extended ? pb.cfg.m() : 0);
    const double n = static_cast<double>(pb.cfg.n());
    for (double& v : s.U.values()) v = 4.0 * kPi * m / area;
    for (double& v : s.F.values()) v = 4.0 * kPi * (m + n) / area;
  } else {
    const Background& bg = a.background;
    const bool ext = pb.variant.model == Model::Extended;
    for (std::size_t k = 0; k < s.U.size(); ++k) {
      const double h1 = ext ? bg.h1[k] : 0.0;
      s.U[k] = h1;
      s.F[k] = h1 + bg.h2[k];
    }
  }
  return s;
}

EquationResidual measure(const Discretization& d, ScalarField& r) {
  d.clamp_fixed(r);
  return {std::sqrt(d.inner(r, r)), norm_sup(r)};
}

std::vector<Point> centres(const Problem& pb) {
  std::vector<Point> pts = pb.cfg.phi_zeros;
  if (pb.variant.model == Model::Extended)
    pts.insert(pts.end(), pb.cfg.kappa_zeros.begin(), pb.cfg.kappa_zeros.end());
  return pts;
}

double torus_distance(const TorusGrid& g, const Point& a, const Point& b) {
  double dx = std::remainder(a.x - b.x, g.Lx);
  double dy = std::remainder(a.y - b.y, g.Ly);
  return std::hypot(dx, dy);
}

// Five-point Laplacian reading true neighbour values; ring output is zero.
ScalarField fd_laplacian_raw(const PlaneGrid& g, const ScalarField& f) {
  ScalarField out(g);
  const double c = 1.0 / (g.h() * g.h());
  for (std::size_t j = 1; j + 1 < g.n; ++j)
    for (std::size_t i = 1; i + 1 < g.n; ++i)
      out(i, j) = c * (f(i + 1, j) + f(i - 1, j) + f(i, j + 1) + f(i, j - 1) - 4.0 * f(i, j));
  return out;
}

}  // namespace

ResidualReport pde_residual(const Problem& pb, const Assembled& a, const StatePair& st) {
  Discretization& d = *a.disc;
  const double lam = pb.params.lambda;
  ScalarField aeu, befu;
  densities(a, st, aeu, befu);
  const Sources s = sources(pb, a);
  ScalarField lu = d.make_field(), lf = d.make_field();
  d.laplacian(st.u, lu);
  d.laplacian(st.f, lf);
  ScalarField r1 = d.make_field(), r2 = d.make_field();
  for (std::size_t k = 0; k < r1.size(); ++k) {
    r1[k] = lu[k] - (lam * (2.0 * aeu[k] - befu[k] - 1.0) + s.U[k]);
    r2[k] = lf[k] - (2.0 * lam * (befu[k] - 1.0) + s.F[k]);
  }
  return {measure(d, r1), measure(d, r2)};
}

FluxReport flux_report(const Problem& pb, const Assembled& a, const StatePair& st) {
  const PhysicalFields ph = reconstruct_physical(pb, a, st);
  return {a.disc->integrate(ph.a12), a.disc->integrate(ph.b12)};
}

BoundReport pointwise_bounds(const Assembled& a, const StatePair& st, double eps) {
  ScalarField aeu, befu;
  densities(a, st, aeu, befu);
  BoundReport b;
  b.eps = eps;
  const double max_ev = max_value(befu);
  b.eu_excess = max_value(aeu) - 1.0;
  b.ev_excess = max_ev - 1.0;
  b.intermediate_excess = 2.0 * max_value(aeu) - max_ev - 1.0;
  b.violated = b.eu_excess > eps || b.ev_excess > eps || b.intermediate_excess > eps;
  return b;
}

ConstraintErrors constraint_errors(const Problem& pb, const Assembled& a, const StatePair& st) {
  const auto* t = std::get_if<TorusGrid>(&pb.grid);
  if (t == nullptr) throw Error(ErrorKind::Unsupported, "constraint identities are torus-only");
  const ThresholdReport rep = check_existence(pb.cfg, *t, pb.params, pb.variant.model);
  ScalarField aeu, befu;
  densities(a, st, aeu, befu);
  const double i1 = a.disc->integrate(befu);
  const double i2 = a.disc->integrate(aeu);
  return {std::abs(i1 - rep.alpha1) / rep.alpha1, std::abs(i2 - rep.alpha2) / rep.alpha2};
}

LagrangeFit verify_lagrange_multipliers(const Problem& pb, const Assembled& a,
                                        const StatePair& st) {
  if (!on_torus(pb) || pb.variant.model != Model::Base)
    throw Error(ErrorKind::Unsupported, "multiplier fit covers the torus base model only");
  Discretization& d = *a.disc;
  const double lam = pb.params.lambda;
  const double src = 4.0 * kPi * static_cast<double>(pb.cfg.n()) / d.area();
  ScalarField aeu, befu;
  densities(a, st, aeu, befu);
  ScalarField lu = d.make_field(), lf = d.make_field();
  d.laplacian(st.u, lu);
  d.laplacian(st.f, lf);
  // Rows:  Lap u + lam         = -l1 E + l2 e^u
  //        Lap f + 2 lam - src =  2 l1 E
  ScalarField y1 = d.make_field(), y2 = d.make_field(), negE = d.make_field(),
              twoE = d.make_field();
  for (std::size_t k = 0; k < y1.size(); ++k) {
    y1[k] = lu[k] + lam;
    y2[k] = lf[k] + 2.0 * lam - src;
    negE[k] = -befu[k];
    twoE[k] = 2.0 * befu[k];
  }
  const double m11 = d.inner(negE, negE) + d.inner(twoE, twoE);
  const double m12 = d.inner(negE, aeu);
  const double m22 = d.inner(aeu, aeu);
  const double r1 = d.inner(negE, y1) + d.inner(twoE, y2);
  const double r2 = d.inner(aeu, y1);
  const double det = m11 * m22 - m12 * m12;
  return {(r1 * m22 - m12 * r2) / det, (m11 * r2 - m12 * r1) / det};
}

PhysicalFields reconstruct_physical(const Problem& pb, const Assembled& a, const StatePair& st) {
  const Background& bg = a.background;
  const double lam = pb.params.lambda;
  Discretization& d = *a.disc;
  PhysicalFields ph{d.make_field(), d.make_field(), d.make_field(), d.make_field(),
                    d.make_field(), d.make_field(), 0.0, 0.0};
  const bool ext = pb.variant.model == Model::Extended;
  for (std::size_t k = 0; k < st.u.size(); ++k) {
    const double w = st.f[k] - st.u[k];
    const double A = ext ? bg.exp_u0[k] : 1.0;
    ph.kappa[k] = std::sqrt(A) * std::exp(0.5 * st.u[k]);
    ph.phi_abs[k] = std::sqrt(bg.exp_v0[k]) * std::exp(0.5 * w);
    ph.u[k] = st.u[k] + (ext ? bg.u0[k] : 0.0);
    ph.v[k] = bg.v0[k] + w;
    const double k2 = ph.kappa[k] * ph.kappa[k];
    const double p2 = ph.phi_abs[k] * ph.phi_abs[k];
    ph.a12[k] = -0.5 * lam * (2.0 * k2 - p2 - 1.0);
    ph.b12[k] = -lam * (p2 - 1.0);
  }

  // Second-difference forms:
  //   a12 = -1/2 Lap(u + u0) + 1/2 (U + Lap u0 smooth part)
  //   b12 = -1/2 Lap(f + v0) + 1/2 (F + Lap v0 smooth part)
  // which reduce to -Lap ln kappa and a12 - 1/2 Lap ln|phi|^2 away from zeros.
  const Sources s = sources(pb, a);
  ScalarField uu = d.make_field(), ff = d.make_field();
  for (std::size_t k = 0; k < uu.size(); ++k) {
    uu[k] = st.u[k] + (ext ? bg.u0[k] : 0.0);
    ff[k] = st.f[k] + bg.v0[k];
  }
  ScalarField lu, lf, su = d.make_field(), sf = d.make_field();
  const double core = 3.0 * std::sqrt(pb.params.tau);
  std::vector<Point> pts = centres(pb);
  std::function<bool(std::size_t, std::size_t)> skip;
  if (const auto* t = std::get_if<TorusGrid>(&pb.grid)) {
    lu = d.make_field();
    lf = d.make_field();
    d.laplacian(uu, lu);
    d.laplacian(ff, lf);
    for (std::size_t k = 0; k < su.size(); ++k) {
      su[k] = ext ? bg.neutralized_source_kappa[k] : 0.0;
      sf[k] = bg.neutralized_source[k];
    }
    skip = [&, t](std::size_t i, std::size_t j) {
      const Point x = t->node(i, j);
      for (const Point& p : pts)
        if (torus_distance(*t, x, p) < core) return true;
      return false;
    };
  } else {
    const PlaneGrid& g = std::get<PlaneGrid>(pb.grid);
    lu = fd_laplacian_raw(g, uu);
    lf = fd_laplacian_raw(g, ff);
    for (std::size_t k = 0; k < su.size(); ++k) {
      su[k] = ext ? -bg.h1[k] : 0.0;
      sf[k] = -bg.h2[k];
    }
    skip = [&, g](std::size_t i, std::size_t j) {
      if (g.on_boundary(i, j)) return true;
      const Point x = g.node(i, j);
      for (const Point& p : pts)
        if (std::hypot(x.x - p.x, x.y - p.y) < core) return true;
      return false;
    };
  }
  for (std::size_t j = 0; j < d.ny(); ++j)
    for (std::size_t i = 0; i < d.nx(); ++i) {
      if (skip(i, j)) continue;
      const std::size_t k = j * d.nx() + i;
      const double a_fd = -0.5 * lu[k] + 0.5 * (s.U[k] + su[k]);
      const double b_fd = -0.5 * lf[k] + 0.5 * (s.F[k] + sf[k]);
      ph.a12_derivative_gap = std::max(ph.a12_derivative_gap, std::abs(a_fd - ph.a12[k]));
      ph.b12_derivative_gap = std::max(ph.b12_derivative_gap, std::abs(b_fd - ph.b12[k]));
    }
  return ph;
}

std::vector<RadialBin> radial_profile(const PlaneGrid& g, const Assembled& a, const StatePair& st,
                                      double dr) {
  if (dr <= 0.0) dr = 2.0 * g.h();
  const Background& bg = a.background;
  const double h = g.h();
  const std::size_t nb = static_cast<std::size_t>(std::ceil(std::sqrt(2.0) * g.R / dr)) + 1;
  std::vector<RadialBin> bins(nb);
  auto u = [&](std::size_t i, std::size_t j) { return st.u(i, j); };
  auto v = [&](std::size_t i, std::size_t j) { return bg.v0(i, j) + st.f(i, j) - st.u(i, j); };
  for (std::size_t j = 1; j + 1 < g.n; ++j)
    for (std::size_t i = 1; i + 1 < g.n; ++i) {
      const Point x = g.node(i, j);
      const double r = std::hypot(x.x, x.y);
      const std::size_t b = static_cast<std::size_t>(r / dr);
      const double ux = (u(i + 1, j) - u(i - 1, j)) / (2.0 * h);
      const double uy = (u(i, j + 1) - u(i, j - 1)) / (2.0 * h);
      const double vx = (v(i + 1, j) - v(i - 1, j)) / (2.0 * h);
      const double vy = (v(i, j + 1) - v(i, j - 1)) / (2.0 * h);
      RadialBin& rb = bins[b];
      rb.r += r;
      rb.mean_u2v2 += u(i, j) * u(i, j) + v(i, j) * v(i, j);
      rb.mean_grad2 += ux * ux + uy * uy + vx * vx + vy * vy;
      ++rb.count;
    }
  std::vector<RadialBin> out;
  for (RadialBin& rb : bins) {
    if (rb.count == 0) continue;
    const double c = static_cast<double>(rb.count);
    rb.r /= c;
    rb.mean_u2v2 /= c;
    rb.mean_grad2 /= c;
    out.push_back(rb);
  }
  return out;
}

DecayFit decay_fit(const Problem& pb, const Assembled& a, const StatePair& st,
                   std::optional<double> r_min, std::optional<double> r_max) {
  const auto* g = std::get_if<PlaneGrid>(&pb.grid);
  if (g == nullptr) throw Error(ErrorKind::Unsupported, "decay fit is plane-only");
  DecayFit fit;
  double far = 0.0;
  for (const Point& p : centres(pb)) far = std::max(far, std::hypot(p.x, p.y));
  fit.r_min = r_min.value_or(far + 3.0 / std::sqrt(pb.params.lambda));
  fit.r_max = r_max.value_or(0.5 * g->R);
  if (fit.r_max > 0.8 * g->R)
    throw Error(ErrorKind::ValidationError, "decay window must stay within 0.8 R");

  std::vector<double> rs, l1, l2;
  for (const RadialBin& b : radial_profile(*g, a, st)) {
    if (b.r < fit.r_min || b.r > fit.r_max) continue;
    if (!(b.mean_u2v2 > 0.0) || !(b.mean_grad2 > 0.0)) continue;
    rs.push_back(b.r);
    l1.push_back(std::log(b.mean_u2v2));
    l2.push_back(std::log(b.mean_grad2));
  }
  fit.bins = rs.size();
  if (fit.bins < 8) {
    std::ostringstream msg;
    msg << "decay annulus [" << fit.r_min << ", " << fit.r_max << "] holds " << fit.bins
        << " radial bins, need 8";
    throw Error(ErrorKind::AnnulusTooThin, msg.str());
  }
  auto slope = [&](const std::vector<double>& y) {
    const double nb = static_cast<double>(rs.size());
    double sx = 0, sy = 0;
    for (std::size_t k = 0; k < rs.size(); ++k) sx += rs[k], sy += y[k];
    const double mx = sx / nb, my = sy / nb;
    double sxy = 0, sxx = 0;
    for (std::size_t k = 0; k < rs.size(); ++k) {
      sxy += (rs[k] - mx) * (y[k] - my);
      sxx += (rs[k] - mx) * (rs[k] - mx);
    }
    return sxy / sxx;
  };
  fit.rate_fields = -slope(l1);
  fit.rate_gradients = -slope(l2);
  return fit;
}

UniquenessResult uniqueness_probe(const Problem& pb, int seeds, const SolverSettings& settings,
                                  unsigned long long base_seed) {
  if (seeds < 1) throw Error(ErrorKind::ValidationError, "uniqueness probe needs >= 1 seed");
  std::vector<StatePair> sols;
  for (int s = 0; s < seeds; ++s) {
    Solution sol = solve(pb, settings, random_smooth_state(pb, base_seed + s));
    if (!sol.converged) throw Error(ErrorKind::NotConverged, "uniqueness probe: " + sol.message);
    sols.push_back(std::move(sol.state));
  }
  UniquenessResult r;
  r.solution_sup = std::max(norm_sup(sols[0].u), norm_sup(sols[0].f));
  for (std::size_t i = 0; i < sols.size(); ++i)
    for (std::size_t j = i + 1; j < sols.size(); ++j)
      r.spread = std::max({r.spread, sup_diff(sols[i].u, sols[j].u), sup_diff(sols[i].f, sols[j].f)});
  return r;
}

DiagnosticsReport run_diagnostics(const Problem& pb, const Assembled& a, const StatePair& st) {
  DiagnosticsReport rep;
  rep.residual = pde_residual(pb, a, st);
  rep.flux = flux_report(pb, a, st);
  rep.bounds = pointwise_bounds(a, st);
  if (on_torus(pb)) {
    rep.constraints = constraint_errors(pb, a, st);
    if (pb.variant.model == Model::Base) rep.lagrange = verify_lagrange_multipliers(pb, a, st);
  } else {
    try {
      rep.decay = decay_fit(pb, a, st);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::AnnulusTooThin) throw;
    }
  }
  return rep;
}

}  // namespace bpsv
