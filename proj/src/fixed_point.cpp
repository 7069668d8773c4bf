#include "bpsv/fixed_point.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "bpsv/error.hpp"
#include "bpsv/field_ops.hpp"
#include "bpsv/kernels.hpp"

namespace bpsv {
namespace {

const TorusGrid& torus_of(const Problem& pb) {
  const auto* t = std::get_if<TorusGrid>(&pb.grid);
  if (t == nullptr || pb.variant.geometry != Geometry::Torus || pb.variant.model != Model::Base)
    throw Error(ErrorKind::Unsupported, "fixed-point route covers the torus base model only");
  return *t;
}

double sup_diff_pair(const ZeroMeanPair& a, const ZeroMeanPair& b) {
  return std::max(sup_diff(a.u_prime, b.u_prime), sup_diff(a.w_prime, b.w_prime));
}

void guard(double v) {
  if (v > kExponentGuard) {
    std::ostringstream msg;
    msg << "exponent " << v << " exceeds guard in fixed-point map";
    throw Error(ErrorKind::Overflow, msg.str());
  }
}

// e^x node-wise into out, returning the cell integral.
double exp_field(const TorusGrid& g, const ScalarField& x, ScalarField& out) {
  guard(max_value(x));
  kernels::active().exp_scaled(x.data(), nullptr, out.data(), x.size());
  return integrate(g, out);
}

void subtract_mean(const TorusGrid& g, ScalarField& f) {
  const double m = mean(g, f);
  for (double& v : f.values()) v -= m;
}

}  // namespace

ContinuationSchedule ContinuationSchedule::uniform(int steps) {
  if (steps < 1) throw Error(ErrorKind::ValidationError, "continuation steps must be >= 1");
  ContinuationSchedule s;
  for (int k = 1; k <= steps; ++k) s.t_values.push_back(static_cast<double>(k) / steps);
  s.t_values.back() = 1.0;
  return s;
}

void ContinuationSchedule::validate() const {
  if (t_values.empty() || t_values.back() != 1.0)
    throw Error(ErrorKind::ValidationError, "schedule must end at t = 1");
  double prev = 0.0;
  for (double t : t_values) {
    if (!(t > prev)) throw Error(ErrorKind::ValidationError, "schedule must increase from 0");
    prev = t;
  }
  if (!(omega > 0.0 && omega <= 1.0) || !(min_omega > 0.0) || !(inner_tol > 0.0) ||
      max_inner_iters < 1 || max_refinements < 0)
    throw Error(ErrorKind::ValidationError, "schedule settings out of range");
}

FixedPointOperator::FixedPointOperator(const Problem& pb)
    : grid_(torus_of(pb)), params_(pb.params), n_(pb.cfg.n()), ws_(grid_) {
  const ThresholdReport rep = check_existence(pb.cfg, grid_, params_, Model::Base);
  C1_ = rep.C1;
  C2_ = rep.C2;
  bg_ = build_background_torus(pb.cfg, grid_, params_);
}

ZeroMeanPair FixedPointOperator::apply(const ZeroMeanPair& pair, double t) {
  const std::size_t N = grid_.size();
  ScalarField eu(grid_), ev(grid_), vp(grid_);
  for (std::size_t k = 0; k < N; ++k) vp[k] = t * bg_.v0[k] + pair.w_prime[k];
  const double Iu = exp_field(grid_, pair.u_prime, eu);
  const double Iv = exp_field(grid_, vp, ev);
  const double lt = params_.lambda * t;
  const double src = 4.0 * std::numbers::pi * static_cast<double>(n_) / grid_.area() * t;
  ScalarField ru(grid_), rw(grid_);
  for (std::size_t k = 0; k < N; ++k) {
    const double h = C2_ * eu[k] / Iu;
    const double g = C1_ * ev[k] / Iv;
    ru[k] = lt * (2.0 * h - g - 1.0);
    rw[k] = lt * (-2.0 * h + 3.0 * g - 1.0) + src;
  }
  // Each mean vanishes analytically; what remains is roundoff.
  const double scale = lt * (1.0 + 3.0 * C1_ / grid_.area()) + src + 1.0;
  for (ScalarField* r : {&ru, &rw}) {
    const double m = mean(grid_, *r);
    if (std::abs(m) > 1e-8 * scale)
      throw Error(ErrorKind::NonZeroMeanRhs, "fixed-point right-hand side lost its zero mean");
    for (double& v : r->values()) v -= m;
  }
  ZeroMeanPair out{ScalarField(grid_), ScalarField(grid_)};
  ws_.inverse_laplacian(ru, out.u_prime);
  ws_.inverse_laplacian(rw, out.w_prime);
  subtract_mean(grid_, out.u_prime);
  subtract_mean(grid_, out.w_prime);
  return out;
}

FixedPointOperator::Densities FixedPointOperator::densities(const ZeroMeanPair& pair,
                                                            double t) const {
  ScalarField eu(grid_), ev(grid_), vp(grid_);
  for (std::size_t k = 0; k < grid_.size(); ++k) vp[k] = t * bg_.v0[k] + pair.w_prime[k];
  const double Iu = exp_field(grid_, pair.u_prime, eu);
  const double Iv = exp_field(grid_, vp, ev);
  return {C2_ * max_value(eu) / Iu, C1_ * max_value(ev) / Iv};
}

StatePair FixedPointOperator::recover(const ZeroMeanPair& pair) const {
  ScalarField eu(grid_), ev(grid_), vp(grid_);
  for (std::size_t k = 0; k < grid_.size(); ++k) vp[k] = bg_.v0[k] + pair.w_prime[k];
  const double ubar = std::log(C2_) - std::log(exp_field(grid_, pair.u_prime, eu));
  const double vbar = std::log(C1_) - std::log(exp_field(grid_, vp, ev));
  StatePair st = StatePair::zeros(grid_.nx, grid_.ny);
  for (std::size_t k = 0; k < grid_.size(); ++k) {
    st.u[k] = pair.u_prime[k] + ubar;
    st.f[k] = st.u[k] + pair.w_prime[k] + vbar;
  }
  return st;
}

double FixedPointOperator::gradient_norm(const ZeroMeanPair& pair) {
  return std::sqrt(ws_.gradient_l2_squared(pair.u_prime) + ws_.gradient_l2_squared(pair.w_prime));
}

ZeroMeanPair apply_T(const ZeroMeanPair& pair, double t, const Problem& pb) {
  FixedPointOperator op(pb);
  return op.apply(pair, t);
}

FixedPointResult continuation_solve(const ContinuationSchedule& schedule, const Problem& pb) {
  schedule.validate();
  const TorusGrid& grid = torus_of(pb);
  const ThresholdReport rep = check_existence(pb.cfg, grid, pb.params, Model::Base);
  if (!rep.solvable) {
    std::ostringstream msg;
    msg << "no solution exists: C1 = " << rep.C1;
    throw Error(ErrorKind::ThresholdViolated, msg.str());
  }
  FixedPointOperator op(pb);
  FixedPointResult res;
  ZeroMeanPair pair{ScalarField(grid), ScalarField(grid)};
  std::vector<double> ts = schedule.t_values;
  double t_prev = 0.0;
  int total_iters = 0;

  try {
    for (std::size_t si = 0; si < ts.size();) {
      const double t = ts[si];
      StageRecord rec;
      rec.t = t;
      ZeroMeanPair cur = pair;
      double omega = schedule.omega;
      ZeroMeanPair tc = op.apply(cur, t);
      double r = sup_diff_pair(cur, tc);
      res.residual_history.push_back(r);
      int it = 0;
      while (r > schedule.inner_tol && it < schedule.max_inner_iters && omega >= schedule.min_omega) {
        ++it;
        ZeroMeanPair next = cur;
        kernels::active().axpby(omega, tc.u_prime.data(), 1.0 - omega, next.u_prime.data(), next.u_prime.size());
        kernels::active().axpby(omega, tc.w_prime.data(), 1.0 - omega, next.w_prime.data(), next.w_prime.size());
        ZeroMeanPair tn;
        double rn;
        try {
          tn = op.apply(next, t);
          rn = sup_diff_pair(next, tn);
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::Overflow) throw;
          rn = INFINITY;
        }
        if (!(rn <= r)) {
          omega *= 0.5;
          continue;
        }
        cur = std::move(next);
        tc = std::move(tn);
        r = rn;
        res.residual_history.push_back(r);
        res.x_norm_ceiling = std::max(res.x_norm_ceiling, op.gradient_norm(cur));
      }
      total_iters += it;
      rec.iterations = it;
      rec.residual = r;
      rec.converged = r <= schedule.inner_tol;
      if (!rec.converged) {
        if (res.refinements < schedule.max_refinements) {
          ++res.refinements;
          ts.insert(ts.begin() + static_cast<std::ptrdiff_t>(si), 0.5 * (t_prev + t));
          res.stages.push_back(rec);
          continue;
        }
        res.stages.push_back(rec);
        std::ostringstream msg;
        msg << "fixed-point stage t = " << t << " stalled at residual " << r;
        res.solution.message = msg.str();
        res.solution.state = op.recover(cur);
        res.solution.iterations = total_iters;
        res.solution.grad_history = res.residual_history;
        return res;
      }
      const auto dens = op.densities(cur, t);
      rec.max_h = dens.max_h;
      rec.max_g = dens.max_g;
      res.stages.push_back(rec);
      pair = std::move(cur);
      t_prev = t;
      ++si;
    }
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Overflow) throw;
    res.solution.message = e.what();
    res.solution.state = op.recover(pair);
    return res;
  }
  res.solution.state = op.recover(pair);
  res.solution.converged = true;
  res.solution.iterations = total_iters;
  res.solution.grad_history = res.residual_history;
  return res;
}

}  // namespace bpsv
