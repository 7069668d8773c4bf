#include "bpsv/newton.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "bpsv/error.hpp"
#include "bpsv/kernels.hpp"

namespace bpsv {
namespace {

void axpby(double a, const StatePair& x, double b, StatePair& y) {
  const auto& k = kernels::active();
  k.axpby(a, x.u.data(), b, y.u.data(), y.u.size());
  k.axpby(a, x.f.data(), b, y.f.data(), y.f.size());
}

struct CgResult {
  StatePair x;
  int iterations = 0;
};

CgResult preconditioned_cg(const Functional& fn, const Functional::Curvature& curv,
                           const StatePair& b, double rel_tol, int max_iters) {
  const Discretization& d = fn.disc();
  CgResult res{StatePair::zeros(d.nx(), d.ny()), 0};
  StatePair r = b;
  StatePair z = fn.precondition(r);
  StatePair p = z;
  double rz = fn.inner(r, z);
  const double bnorm = std::sqrt(fn.inner(b, b));
  if (bnorm == 0.0) return res;
  for (int it = 0; it < max_iters; ++it) {
    const StatePair hp = fn.hessian_apply(curv, p);
    const double php = fn.inner(p, hp);
    if (!(php > 0.0)) break;
    const double alpha = rz / php;
    axpby(alpha, p, 1.0, res.x);
    axpby(-alpha, hp, 1.0, r);
    res.iterations = it + 1;
    if (std::sqrt(fn.inner(r, r)) <= rel_tol * bnorm) break;
    z = fn.precondition(r);
    const double rz_new = fn.inner(r, z);
    const double beta = rz_new / rz;
    rz = rz_new;
    axpby(1.0, z, beta, p);
  }
  return res;
}

}  // namespace

void SolverSettings::validate() const {
  if (!(tol_grad_sup > 0.0) || max_iters <= 0 || !(armijo_c > 0.0) || !(armijo_c < 0.5) ||
      !(backtrack_factor > 0.0 && backtrack_factor < 1.0) || !(cg_tol > 0.0) || cg_max_iters <= 0)
    throw Error(ErrorKind::ValidationError, "solver settings out of range");
}

Solution minimize(const Functional& fn, StatePair x, const SolverSettings& settings) {
  settings.validate();
  Solution sol;
  const Discretization& d = fn.disc();
  d.clamp_fixed(x.u);
  d.clamp_fixed(x.f);
  try {
    double energy = fn.energy(x).total;
    for (int iter = 0;; ++iter) {
      const StatePair g = fn.gradient(x);
      const double gsup = fn.sup_norm(g);
      sol.grad_history.push_back(gsup);
      sol.energy_history.push_back(energy);
      sol.iterations = iter;
      if (gsup <= settings.tol_grad_sup) {
        sol.converged = true;
        break;
      }
      if (iter >= settings.max_iters) {
        std::ostringstream msg;
        msg << "max_iters " << settings.max_iters << " reached, gradient sup " << gsup;
        sol.message = msg.str();
        break;
      }

      const Functional::Curvature curv = fn.curvature(x);
      StatePair rhs = g;
      axpby(0.0, g, -1.0, rhs);
      CgResult cg = preconditioned_cg(fn, curv, rhs, settings.cg_tol, settings.cg_max_iters);
      sol.cg_iterations += cg.iterations;
      StatePair dir = std::move(cg.x);
      double slope = fn.inner(g, dir);
      if (!(slope < 0.0)) {
        dir = fn.precondition(rhs);
        slope = fn.inner(g, dir);
      }

      const Functional::LineModel lm = fn.line_model(x, dir);
      double alpha = 1.0;
      double change = lm.change(alpha);
      while (!(change <= settings.armijo_c * alpha * slope)) {
        alpha *= settings.backtrack_factor;
        if (alpha < 1e-14) break;
        change = lm.change(alpha);
      }
      if (alpha < 1e-14) {
        std::ostringstream msg;
        msg << "line search failed at iteration " << iter << ", gradient sup " << gsup;
        sol.message = msg.str();
        break;
      }
      axpby(alpha, dir, 1.0, x);
      energy = fn.energy(x).total;
    }
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Overflow) throw;
    sol.converged = false;
    sol.message = e.what();
  }
  sol.state = std::move(x);
  return sol;
}

Assembled assemble(const Problem& pb) {
  Assembled a;
  if (const auto* t = std::get_if<TorusGrid>(&pb.grid)) {
    a.background = build_background_torus(pb.cfg, *t, pb.params);
  } else {
    a.background = build_background_plane(pb.cfg, std::get<PlaneGrid>(pb.grid), pb.params);
  }
  a.disc = make_discretization(pb.grid);
  a.functional = std::make_unique<Functional>(pb.variant, a.disc, a.background, pb.cfg, pb.params);
  return a;
}

Solution solve(const Problem& pb, const SolverSettings& settings, std::optional<StatePair> init) {
  if (const auto* t = std::get_if<TorusGrid>(&pb.grid)) {
    const ThresholdReport rep = check_existence(pb.cfg, *t, pb.params, pb.variant.model);
    if (!rep.solvable) {
      std::ostringstream msg;
      msg << "no solution exists: alpha1 = " << rep.alpha1 << ", alpha2 = " << rep.alpha2;
      throw Error(ErrorKind::ThresholdViolated, msg.str());
    }
  }
  Assembled a = assemble(pb);
  StatePair x = init ? std::move(*init) : StatePair::zeros(a.disc->nx(), a.disc->ny());
  return minimize(*a.functional, std::move(x), settings);
}

ContinuationResult continuation_in_vortices(const Problem& pb, const SolverSettings& settings) {
  ContinuationResult out;
  const std::size_t n = pb.cfg.n();
  std::optional<StatePair> warm;
  const std::size_t first = n == 0 ? 0 : 1;
  for (std::size_t k = first; k <= n; ++k) {
    Problem stage = pb;
    stage.cfg.phi_zeros.assign(pb.cfg.phi_zeros.begin(), pb.cfg.phi_zeros.begin() + k);
    Solution s = solve(stage, settings, warm);
    out.stage_iterations.push_back(s.iterations);
    if (!s.converged || k == n) {
      out.solution = std::move(s);
      break;
    }
    warm = s.state;
  }
  return out;
}

StatePair random_smooth_state(const Problem& pb, unsigned long long seed, double amplitude) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> amp(-amplitude, amplitude);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  const auto disc = make_discretization(pb.grid);
  StatePair st = StatePair::zeros(disc->nx(), disc->ny());
  constexpr int kModes = 3;
  for (ScalarField* f : {&st.u, &st.f}) {
    if (const auto* t = std::get_if<TorusGrid>(&pb.grid)) {
      for (int a = 0; a < kModes; ++a) {
        for (int b = -kModes + 1; b < kModes; ++b) {
          const double c = amp(rng) / (1.0 + a * a + b * b);
          const double ph = phase(rng);
          for (std::size_t j = 0; j < t->ny; ++j)
            for (std::size_t i = 0; i < t->nx; ++i) {
              const Point x = t->node(i, j);
              (*f)(i, j) += c * std::cos(2.0 * std::numbers::pi * (a * x.x / t->Lx + b * x.y / t->Ly) + ph);
            }
        }
      }
    } else {
      const PlaneGrid& g = std::get<PlaneGrid>(pb.grid);
      for (int a = 1; a <= kModes; ++a) {
        for (int b = 1; b <= kModes; ++b) {
          const double c = amp(rng) / (a * a + b * b);
          for (std::size_t j = 0; j < g.n; ++j)
            for (std::size_t i = 0; i < g.n; ++i) {
              const Point x = g.node(i, j);
              (*f)(i, j) += c * std::sin(a * std::numbers::pi * (x.x + g.R) / (2.0 * g.R)) *
                            std::sin(b * std::numbers::pi * (x.y + g.R) / (2.0 * g.R));
            }
        }
      }
      disc->clamp_fixed(*f);
    }
  }
  return st;
}

}  // namespace bpsv
