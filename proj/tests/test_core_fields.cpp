#include <doctest.h>

#include <cmath>
#include <random>

#include "bpsv/error.hpp"
#include "bpsv/field_ops.hpp"
#include "bpsv/plane_ops.hpp"
#include "bpsv/spectral.hpp"
#include "support.hpp"

using namespace bpsv;
using bpsv::testing::kPi;

namespace {

ScalarField fd_laplacian_periodic(const TorusGrid& g, const ScalarField& f) {
  ScalarField out(g);
  for (std::size_t j = 0; j < g.ny; ++j)
    for (std::size_t i = 0; i < g.nx; ++i) {
      const std::size_t ip = (i + 1) % g.nx, im = (i + g.nx - 1) % g.nx;
      const std::size_t jp = (j + 1) % g.ny, jm = (j + g.ny - 1) % g.ny;
      out(i, j) = (f(ip, j) - 2 * f(i, j) + f(im, j)) / (g.dx() * g.dx()) +
                  (f(i, jp) - 2 * f(i, j) + f(i, jm)) / (g.dy() * g.dy());
    }
  return out;
}

double rel_l2(const TorusGrid& g, const ScalarField& a, const ScalarField& b) {
  ScalarField d(g);
  for (std::size_t k = 0; k < d.size(); ++k) d[k] = a[k] - b[k];
  return norm_l2(g, d) / norm_l2(g, b);
}

}  // namespace

TEST_SUITE("core_fields") {

TEST_CASE("grid validation") {
  CHECK_NOTHROW(TorusGrid{1, 1, 8, 8}.validate());
  CHECK_THROWS_AS(TorusGrid({1, 1, 6, 8}).validate(), Error);
  CHECK_THROWS_AS(TorusGrid({1, 1, 9, 8}).validate(), Error);
  CHECK_THROWS_AS(TorusGrid({0, 1, 8, 8}).validate(), Error);
  CHECK_NOTHROW(PlaneGrid{1, 16}.validate());
  CHECK_THROWS_AS(PlaneGrid({1, 15}).validate(), Error);
  CHECK_THROWS_AS(PlaneGrid({-1, 32}).validate(), Error);
}

TEST_CASE("node layout is row major with x fastest") {
  TorusGrid g{2.0, 3.0, 8, 12};
  ScalarField f(g);
  f(3, 5) = 1.0;
  CHECK(f[5 * 8 + 3] == 1.0);
  CHECK(g.node(3, 5).x == doctest::Approx(0.75));
  CHECK(g.node(3, 5).y == doctest::Approx(1.25));
  PlaneGrid p{2.0, 21};
  CHECK(p.node(0, 0).x == -2.0);
  CHECK(p.node(20, 20).y == doctest::Approx(2.0));
  CHECK(p.node(10, 10).x == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("torus quadrature") {
  TorusGrid g{3.0, 2.0, 32, 16};
  CHECK(integrate(g, ScalarField(g, 1.0)) == doctest::Approx(6.0).epsilon(1e-15));
  ScalarField c(g);
  for (std::size_t j = 0; j < g.ny; ++j)
    for (std::size_t i = 0; i < g.nx; ++i) c(i, j) = std::cos(2 * kPi * g.node(i, j).x / g.Lx);
  CHECK(std::abs(integrate(g, c)) < 1e-14);
  CHECK(mean(g, ScalarField(g, 2.5)) == doctest::Approx(2.5).epsilon(1e-15));
  CHECK(norm_l2(g, ScalarField(g)) == 0.0);
  CHECK(norm_l2(g, c) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-13));
}

TEST_CASE("plane trapezoid is exact for bilinear integrands") {
  PlaneGrid g{2.0, 33};
  ScalarField f(g);
  for (std::size_t j = 0; j < g.n; ++j)
    for (std::size_t i = 0; i < g.n; ++i) {
      const Point x = g.node(i, j);
      f(i, j) = 1.0 + x.x + 2.0 * x.y + x.x * x.y;
    }
  CHECK(integrate(g, f) == doctest::Approx(16.0).epsilon(1e-13));
  CHECK(inner_product(g, f, ScalarField(g, 1.0)) == doctest::Approx(16.0).epsilon(1e-13));
}

TEST_CASE("reductions do not depend on the kernel table") {
  std::mt19937_64 rng(5);
  TorusGrid g{1, 1, 64, 48};
  const ScalarField a = testing::smooth_torus_field(g, rng);
  const double s1 = pairwise_sum(a.values());
  const double s2 = pairwise_sum(a.values());
  CHECK(s1 == s2);
}

TEST_CASE("spectral Laplacian: constants, single modes, finite-difference agreement") {
  TorusGrid g{5.0, 4.0, 64, 64};
  SpectralWorkspace ws(g);
  CHECK(norm_sup(laplacian_torus(ws, ScalarField(g, 3.0))) < 1e-12);

  ScalarField c(g), expect(g);
  const double k = 2 * kPi / g.Lx;
  for (std::size_t j = 0; j < g.ny; ++j)
    for (std::size_t i = 0; i < g.nx; ++i) {
      c(i, j) = std::cos(k * g.node(i, j).x);
      expect(i, j) = -k * k * c(i, j);
    }
  CHECK(sup_diff(laplacian_torus(ws, c), expect) < 1e-12);

  // Second-order FD error quarters when the grid doubles.
  std::mt19937_64 rng(3);
  double err[2];
  for (int r = 0; r < 2; ++r) {
    TorusGrid gr{5.0, 4.0, std::size_t(32) << r, std::size_t(32) << r};
    SpectralWorkspace w(gr);
    std::mt19937_64 same(3);
    const ScalarField f = testing::smooth_torus_field(gr, same, 2);
    err[r] = rel_l2(gr, fd_laplacian_periodic(gr, f), laplacian_torus(w, f));
  }
  CHECK(err[0] / err[1] == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("Poisson inversion") {
  TorusGrid g{5.0, 4.0, 64, 32};
  SpectralWorkspace ws(g);
  CHECK(norm_sup(poisson_solve_zero_mean(ws, ScalarField(g))) == 0.0);

  ScalarField c(g), expect(g);
  const double k = 2 * kPi / g.Lx;
  for (std::size_t j = 0; j < g.ny; ++j)
    for (std::size_t i = 0; i < g.nx; ++i) {
      c(i, j) = std::cos(k * g.node(i, j).x);
      expect(i, j) = -c(i, j) / (k * k);
    }
  CHECK(sup_diff(poisson_solve_zero_mean(ws, c), expect) < 1e-13);

  std::mt19937_64 rng(11);
  ScalarField rhs = testing::smooth_torus_field(g, rng, 6);
  const double m = mean(g, rhs);
  for (double& v : rhs.values()) v -= m;
  const ScalarField U = poisson_solve_zero_mean(ws, rhs);
  CHECK(rel_l2(g, laplacian_torus(ws, U), rhs) < 1e-10);
  CHECK(std::abs(mean(g, U)) <= 1e-12 * norm_sup(U));

  ScalarField shifted = rhs;
  for (double& v : shifted.values()) v += 0.1;
  try {
    poisson_solve_zero_mean(ws, shifted);
    FAIL("expected NonZeroMeanRhs");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonZeroMeanRhs);
  }
}

TEST_CASE("spectral Laplacian is self-adjoint and Parseval holds") {
  TorusGrid g{3.0, 7.0, 32, 64};
  SpectralWorkspace ws(g);
  std::mt19937_64 rng(21);
  const ScalarField a = testing::smooth_torus_field(g, rng, 5);
  const ScalarField b = testing::smooth_torus_field(g, rng, 5);
  const double lhs = inner_product(g, laplacian_torus(ws, a), b);
  const double rhs = inner_product(g, a, laplacian_torus(ws, b));
  CHECK(std::abs(lhs - rhs) <= 1e-10 * std::abs(lhs));
  const double n2 = norm_l2(g, a);
  CHECK(ws.spectral_l2_squared(a) == doctest::Approx(n2 * n2).epsilon(1e-10));
  CHECK(ws.gradient_l2_squared(a) == doctest::Approx(-inner_product(g, laplacian_torus(ws, a), a)).epsilon(1e-10));
}

TEST_CASE("shifted solve inverts -Lap + sigma") {
  TorusGrid g{2.0, 2.0, 32, 32};
  SpectralWorkspace ws(g);
  std::mt19937_64 rng(8);
  const ScalarField f = testing::smooth_torus_field(g, rng);
  ScalarField u(g), lu(g);
  ws.solve_shifted(f, 1.5, u);
  ws.laplacian(u, lu);
  ScalarField back(g);
  for (std::size_t k = 0; k < back.size(); ++k) back[k] = -lu[k] + 1.5 * u[k];
  CHECK(sup_diff(back, f) < 1e-12);
}

TEST_CASE("plane stencil: zero, quadratics, second order") {
  PlaneGrid g{1.0, 33};
  CHECK(norm_sup(laplacian_plane(g, ScalarField(g))) == 0.0);

  ScalarField q(g);
  for (std::size_t j = 0; j < g.n; ++j)
    for (std::size_t i = 0; i < g.n; ++i) {
      const Point x = g.node(i, j);
      q(i, j) = x.x * x.x + x.y * x.y;
    }
  // Ring value 2 matches x^2 + y^2 only at the corners, so test nodes two away.
  const ScalarField lq = laplacian_plane(g, q, 0.0);
  for (std::size_t j = 2; j + 2 < g.n; ++j)
    for (std::size_t i = 2; i + 2 < g.n; ++i) CHECK(lq(i, j) == doctest::Approx(4.0).epsilon(1e-10));

  double err[2];
  for (int r = 0; r < 2; ++r) {
    PlaneGrid gr{1.0, (std::size_t(32) << r) + 1};
    ScalarField f(gr), exact(gr);
    for (std::size_t j = 0; j < gr.n; ++j)
      for (std::size_t i = 0; i < gr.n; ++i) {
        const Point x = gr.node(i, j);
        f(i, j) = std::sin(kPi * (x.x + 1) / 2) * std::sin(kPi * (x.y + 1));
        exact(i, j) = -(kPi * kPi / 4 + kPi * kPi) * f(i, j);
      }
    const ScalarField l = laplacian_plane(gr, f);
    double e = 0.0;
    for (std::size_t j = 1; j + 1 < gr.n; ++j)
      for (std::size_t i = 1; i + 1 < gr.n; ++i) e = std::max(e, std::abs(l(i, j) - exact(i, j)));
    err[r] = e;
  }
  CHECK(err[0] / err[1] == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("sine solver inverts the Dirichlet stencil") {
  PlaneGrid g{3.0, 41};
  DirichletSineSolver dst(g);
  std::mt19937_64 rng(4);
  const ScalarField f = testing::smooth_plane_field(g, rng);
  ScalarField u(g);
  dst.solve_shifted(f, 0.7, u);
  const ScalarField lu = laplacian_plane(g, u);
  double worst = 0.0;
  for (std::size_t j = 1; j + 1 < g.n; ++j)
    for (std::size_t i = 1; i + 1 < g.n; ++i)
      worst = std::max(worst, std::abs(-lu(i, j) + 0.7 * u(i, j) - f(i, j)));
  CHECK(worst < 1e-12);
  for (std::size_t i = 0; i < g.n; ++i) {
    CHECK(u(i, 0) == 0.0);
    CHECK(u(0, i) == 0.0);
  }
}

}
