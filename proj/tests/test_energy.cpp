#include <doctest.h>

#include <cmath>
#include <random>

#include "bpsv/error.hpp"
#include "bpsv/field_ops.hpp"
#include "bpsv/newton.hpp"
#include "support.hpp"

using namespace bpsv;
using bpsv::testing::kPi;

namespace {

Problem torus_problem(Model model, std::size_t N = 32) {
  TorusGrid g{5.0, 4.0, N, N};
  VortexConfig c{{{1.1, 1.3}, {3.4, 2.9}}, {}};
  if (model == Model::Extended) c.kappa_zeros = {{2.2, 0.7}};
  return {{Geometry::Torus, model}, g, c, {1.2, default_tau(g)}};
}

Problem plane_problem(Model model, std::size_t N = 33) {
  PlaneGrid g{4.0, N};
  VortexConfig c{{{0.5, -0.3}}, {}};
  if (model == Model::Extended) c.kappa_zeros = {{-1.0, 1.0}};
  return {{Geometry::Plane, model}, g, c, {1.5, 0.3}};
}

StatePair random_state(const Problem& pb, std::mt19937_64& rng, double amp = 0.5) {
  if (const auto* t = std::get_if<TorusGrid>(&pb.grid))
    return {testing::smooth_torus_field(*t, rng, 3, amp), testing::smooth_torus_field(*t, rng, 3, amp)};
  const auto& p = std::get<PlaneGrid>(pb.grid);
  return {testing::smooth_plane_field(p, rng, 3, amp), testing::smooth_plane_field(p, rng, 3, amp)};
}

StatePair combo(const StatePair& a, double s, const StatePair& d) {
  StatePair out = a;
  for (std::size_t k = 0; k < out.u.size(); ++k) {
    out.u[k] += s * d.u[k];
    out.f[k] += s * d.f[k];
  }
  return out;
}

std::vector<Problem> all_variants() {
  return {torus_problem(Model::Base), torus_problem(Model::Extended), plane_problem(Model::Base),
          plane_problem(Model::Extended)};
}

}  // namespace

TEST_SUITE("energy") {

TEST_CASE("trivial states") {
  TorusGrid g{5.0, 4.0, 16, 16};
  Problem pb{{Geometry::Torus, Model::Base}, g, {}, {1.7, default_tau(g)}};
  Assembled a = assemble(pb);
  const StatePair zero = StatePair::zeros(16, 16);
  const auto e = a.functional->energy(zero);
  CHECK(e.total == doctest::Approx(3 * 1.7 * 20).epsilon(1e-14));
  CHECK(e.total == doctest::Approx(e.gradient_part + e.exponential_part + e.linear_part).epsilon(1e-12));
  CHECK(a.functional->sup_norm(a.functional->gradient(zero)) < 1e-14);

  Problem pext = pb;
  pext.variant.model = Model::Extended;
  Assembled ae = assemble(pext);
  CHECK(ae.functional->sup_norm(ae.functional->gradient(zero)) < 1e-14);

  PlaneGrid pg{5.0, 33};
  Problem pp{{Geometry::Plane, Model::Base}, pg, {}, {2.0, 0.2}};
  Assembled ap = assemble(pp);
  const StatePair pz = StatePair::zeros(33, 33);
  CHECK(ap.functional->energy(pz).total == 0.0);
  CHECK(ap.functional->sup_norm(ap.functional->gradient(pz)) == 0.0);
}

TEST_CASE("parts sum to the total") {
  std::mt19937_64 rng(1);
  for (const Problem& pb : all_variants()) {
    Assembled a = assemble(pb);
    const auto e = a.functional->energy(random_state(pb, rng));
    CHECK(e.total == doctest::Approx(e.gradient_part + e.exponential_part + e.linear_part).epsilon(1e-12));
  }
}

TEST_CASE("constant shift on the torus matches direct re-evaluation") {
  Problem pb = torus_problem(Model::Base);
  Assembled a = assemble(pb);
  std::mt19937_64 rng(2);
  const StatePair s = random_state(pb, rng);
  const double c = 0.37, lam = pb.params.lambda, area = 20.0;
  StatePair t = s;
  for (double& v : t.u.values()) v += c;
  for (double& v : t.f.values()) v += c;
  ScalarField eu(s.u.nx(), s.u.ny());
  for (std::size_t k = 0; k < eu.size(); ++k) eu[k] = std::exp(s.u[k]);
  const double predicted = 2 * lam * (std::exp(c) - 1) * a.disc->integrate(eu) - 2 * lam * c * area +
                           2 * kPi * 2 * c;
  const double actual = a.functional->energy(t).total - a.functional->energy(s).total;
  CHECK(actual == doctest::Approx(predicted).epsilon(1e-10));
}

TEST_CASE("m = 0 extended energy equals base energy") {
  std::mt19937_64 rng(3);
  for (Geometry geo : {Geometry::Torus, Geometry::Plane}) {
    Problem b = geo == Geometry::Torus ? torus_problem(Model::Base) : plane_problem(Model::Base);
    Problem e = b;
    e.variant.model = Model::Extended;
    Assembled ab = assemble(b), ae = assemble(e);
    for (int r = 0; r < 5; ++r) {
      const StatePair s = random_state(b, rng);
      CHECK(ae.functional->energy(s).total == doctest::Approx(ab.functional->energy(s).total).epsilon(1e-12));
    }
  }
}

TEST_CASE("gradient and Hessian against central differences, all variants") {
  std::mt19937_64 rng(4);
  const double eps = 1e-5;
  for (const Problem& pb : all_variants()) {
    Assembled a = assemble(pb);
    const Functional& fn = *a.functional;
    for (int r = 0; r < 3; ++r) {
      const StatePair s = random_state(pb, rng);
      const StatePair d = random_state(pb, rng);
      const double fd = (fn.energy(combo(s, eps, d)).total - fn.energy(combo(s, -eps, d)).total) / (2 * eps);
      const double an = fn.inner(fn.gradient(s), d);
      CHECK(std::abs(fd - an) <= 1e-6 * std::abs(an));

      const StatePair gp = fn.gradient(combo(s, eps, d));
      const StatePair gm = fn.gradient(combo(s, -eps, d));
      const StatePair hd = fn.hessian_apply(s, d);
      StatePair diff = hd;
      for (std::size_t k = 0; k < diff.u.size(); ++k) {
        diff.u[k] = (gp.u[k] - gm.u[k]) / (2 * eps) - hd.u[k];
        diff.f[k] = (gp.f[k] - gm.f[k]) / (2 * eps) - hd.f[k];
      }
      CHECK(std::sqrt(fn.inner(diff, diff)) <= 1e-4 * std::sqrt(fn.inner(hd, hd)));
    }
  }
}

TEST_CASE("Hessian: zero direction, symmetry, positivity") {
  std::mt19937_64 rng(5);
  for (const Problem& pb : all_variants()) {
    Assembled a = assemble(pb);
    const Functional& fn = *a.functional;
    const StatePair s = random_state(pb, rng);
    const StatePair z = StatePair::zeros(a.disc->nx(), a.disc->ny());
    CHECK(fn.sup_norm(fn.hessian_apply(s, z)) == 0.0);
    const StatePair d1 = random_state(pb, rng), d2 = random_state(pb, rng);
    const double x = fn.inner(d1, fn.hessian_apply(s, d2));
    const double y = fn.inner(d2, fn.hessian_apply(s, d1));
    CHECK(std::abs(x - y) <= 1e-10 * std::abs(x));
    for (int r = 0; r < 20; ++r) {
      const StatePair d = random_state(pb, rng);
      CHECK(fn.inner(d, fn.hessian_apply(s, d)) > 0.0);
    }
  }
}

TEST_CASE("line model agrees with direct energy differences") {
  std::mt19937_64 rng(6);
  for (const Problem& pb : all_variants()) {
    Assembled a = assemble(pb);
    const Functional& fn = *a.functional;
    const StatePair s = random_state(pb, rng), d = random_state(pb, rng);
    const auto lm = fn.line_model(s, d);
    for (double alpha : {1.0, 0.25, 1e-3}) {
      const double direct = fn.energy(combo(s, alpha, d)).total - fn.energy(s).total;
      CHECK(lm.change(alpha) == doctest::Approx(direct).epsilon(1e-8).scale(std::abs(fn.energy(s).total)));
    }
    CHECK(lm.change(0.0) == 0.0);
  }
}

TEST_CASE("overflow guard") {
  Problem pb = torus_problem(Model::Base, 16);
  Assembled a = assemble(pb);
  StatePair s = StatePair::zeros(16, 16);
  s.u[5] = 701.0;
  try {
    a.functional->energy(s);
    FAIL("expected Overflow");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Overflow);
  }
  CHECK_THROWS_AS(a.functional->gradient(s), Error);
  StatePair d = StatePair::zeros(16, 16);
  d.f[3] = 1000.0;
  const auto lm = a.functional->line_model(StatePair::zeros(16, 16), d);
  CHECK(std::isinf(lm.change(1.0)));
}

TEST_CASE("named entry points check the variant") {
  Problem pb = torus_problem(Model::Base, 16);
  Assembled a = assemble(pb);
  const StatePair z = StatePair::zeros(16, 16);
  CHECK(energy_torus_base(*a.functional, z).total == a.functional->energy(z).total);
  CHECK_NOTHROW(gradient_torus_base(*a.functional, z));
  CHECK_NOTHROW(hessian_apply_torus_base(*a.functional, z, z));
  try {
    energy_plane_base(*a.functional, z);
    FAIL("expected Unsupported");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Unsupported);
  }
  CHECK_THROWS_AS(gradient_torus_extended(*a.functional, z), Error);
}

}
