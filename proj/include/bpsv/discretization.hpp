#pragma once

#include <memory>
#include <variant>

#include "bpsv/grid.hpp"
#include "bpsv/plane_ops.hpp"
#include "bpsv/problem.hpp"
#include "bpsv/spectral.hpp"

namespace bpsv {

// The operator set a functional needs from its grid: Laplacian, shifted
// inverse, quadrature, and the mask of free nodes. Holds transform plans, so
// one instance per solve.
class Discretization {
 public:
  virtual ~Discretization() = default;

  virtual Geometry geometry() const = 0;
  virtual std::size_t nx() const = 0;
  virtual std::size_t ny() const = 0;
  std::size_t size() const { return nx() * ny(); }

  virtual void laplacian(const ScalarField& in, ScalarField& out) = 0;
  virtual void solve_shifted(const ScalarField& rhs, double sigma, ScalarField& out) = 0;
  virtual double integrate(const ScalarField& f) const = 0;
  virtual double inner(const ScalarField& a, const ScalarField& b) const = 0;
  // Zeroes every node that carries fixed (Dirichlet) data.
  virtual void clamp_fixed(ScalarField& f) const = 0;
  virtual Point node(std::size_t i, std::size_t j) const = 0;
  // |Omega| for the torus, (2R)^2 for the truncated plane.
  virtual double area() const = 0;

  ScalarField make_field(double fill = 0.0) const { return ScalarField(nx(), ny(), fill); }
};

class TorusDiscretization final : public Discretization {
 public:
  explicit TorusDiscretization(const TorusGrid& g) : grid_(g), ws_(g) {}

  Geometry geometry() const override { return Geometry::Torus; }
  std::size_t nx() const override { return grid_.nx; }
  std::size_t ny() const override { return grid_.ny; }
  void laplacian(const ScalarField& in, ScalarField& out) override { ws_.laplacian(in, out); }
  void solve_shifted(const ScalarField& rhs, double sigma, ScalarField& out) override {
    ws_.solve_shifted(rhs, sigma, out);
  }
  double integrate(const ScalarField& f) const override;
  double inner(const ScalarField& a, const ScalarField& b) const override;
  void clamp_fixed(ScalarField&) const override {}
  Point node(std::size_t i, std::size_t j) const override { return grid_.node(i, j); }
  double area() const override { return grid_.area(); }

  const TorusGrid& grid() const { return grid_; }
  SpectralWorkspace& workspace() { return ws_; }

 private:
  TorusGrid grid_;
  SpectralWorkspace ws_;
};

class PlaneDiscretization final : public Discretization {
 public:
  explicit PlaneDiscretization(const PlaneGrid& g) : grid_(g), dst_(g) {}

  Geometry geometry() const override { return Geometry::Plane; }
  std::size_t nx() const override { return grid_.n; }
  std::size_t ny() const override { return grid_.n; }
  void laplacian(const ScalarField& in, ScalarField& out) override;
  void solve_shifted(const ScalarField& rhs, double sigma, ScalarField& out) override {
    dst_.solve_shifted(rhs, sigma, out);
  }
  double integrate(const ScalarField& f) const override;
  double inner(const ScalarField& a, const ScalarField& b) const override;
  void clamp_fixed(ScalarField& f) const override;
  Point node(std::size_t i, std::size_t j) const override { return grid_.node(i, j); }
  double area() const override { return 4.0 * grid_.R * grid_.R; }

  const PlaneGrid& grid() const { return grid_; }

 private:
  PlaneGrid grid_;
  DirichletSineSolver dst_;
};

using AnyGrid = std::variant<TorusGrid, PlaneGrid>;

std::unique_ptr<Discretization> make_discretization(const AnyGrid& grid);

}  // namespace bpsv
