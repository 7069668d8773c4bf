#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace bpsv {

struct Point {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point&, const Point&) = default;
};

// Doubly periodic rectangle [0, Lx) x [0, Ly); node (i, j) sits at
// (i*dx, j*dy) and is stored at index j*nx + i.
struct TorusGrid {
  double Lx = 1.0;
  double Ly = 1.0;
  std::size_t nx = 64;
  std::size_t ny = 64;

  double dx() const { return Lx / static_cast<double>(nx); }
  double dy() const { return Ly / static_cast<double>(ny); }
  double area() const { return Lx * Ly; }
  double cell() const { return dx() * dy(); }
  std::size_t size() const { return nx * ny; }
  Point node(std::size_t i, std::size_t j) const {
    return {static_cast<double>(i) * dx(), static_cast<double>(j) * dy()};
  }
  bool contains(const Point& p) const { return p.x >= 0.0 && p.x < Lx && p.y >= 0.0 && p.y < Ly; }

  // Throws ValidationError unless lengths are positive and counts even and >= 8.
  void validate() const;
};

// Truncated plane [-R, R]^2 sampled by n nodes per axis including the
// boundary ring, which carries Dirichlet data.
struct PlaneGrid {
  double R = 10.0;
  std::size_t n = 128;

  double h() const { return 2.0 * R / static_cast<double>(n - 1); }
  std::size_t size() const { return n * n; }
  std::size_t nx() const { return n; }
  std::size_t ny() const { return n; }
  Point node(std::size_t i, std::size_t j) const {
    return {-R + static_cast<double>(i) * h(), -R + static_cast<double>(j) * h()};
  }
  bool contains(const Point& p) const { return p.x > -R && p.x < R && p.y > -R && p.y < R; }
  bool on_boundary(std::size_t i, std::size_t j) const {
    return i == 0 || j == 0 || i + 1 == n || j + 1 == n;
  }

  void validate() const;
};

// Samples of one scalar unknown, row-major with x fastest.
class ScalarField {
 public:
  ScalarField() = default;
  ScalarField(std::size_t nx, std::size_t ny, double fill = 0.0)
      : nx_(nx), ny_(ny), values_(nx * ny, fill) {}
  explicit ScalarField(const TorusGrid& g, double fill = 0.0) : ScalarField(g.nx, g.ny, fill) {}
  explicit ScalarField(const PlaneGrid& g, double fill = 0.0) : ScalarField(g.n, g.n, fill) {}

  std::size_t nx() const { return nx_; }
  std::size_t ny() const { return ny_; }
  std::size_t size() const { return values_.size(); }

  double& operator()(std::size_t i, std::size_t j) { return values_[j * nx_ + i]; }
  double operator()(std::size_t i, std::size_t j) const { return values_[j * nx_ + i]; }
  double& operator[](std::size_t k) { return values_[k]; }
  double operator[](std::size_t k) const { return values_[k]; }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  double* data() { return values_.data(); }
  const double* data() const { return values_.data(); }

  bool same_shape(const ScalarField& o) const { return nx_ == o.nx_ && ny_ == o.ny_; }
  bool all_finite() const;

  friend bool operator==(const ScalarField&, const ScalarField&) = default;

 private:
  std::size_t nx_ = 0;
  std::size_t ny_ = 0;
  std::vector<double> values_;
};

}  // namespace bpsv
