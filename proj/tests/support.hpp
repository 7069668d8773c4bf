#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include "bpsv/grid.hpp"

namespace bpsv::testing {

inline constexpr double kPi = std::numbers::pi;

// A few low trigonometric modes with random coefficients.
inline ScalarField smooth_torus_field(const TorusGrid& g, std::mt19937_64& rng, int modes = 3,
                                      double amp = 1.0) {
  std::uniform_real_distribution<double> U(-amp, amp);
  ScalarField f(g);
  for (int a = -modes; a <= modes; ++a)
    for (int b = -modes; b <= modes; ++b) {
      const double c = U(rng), s = U(rng);
      for (std::size_t j = 0; j < g.ny; ++j)
        for (std::size_t i = 0; i < g.nx; ++i) {
          const Point x = g.node(i, j);
          const double th = 2.0 * kPi * (a * x.x / g.Lx + b * x.y / g.Ly);
          f(i, j) += (c * std::cos(th) + s * std::sin(th)) / (1.0 + a * a + b * b);
        }
    }
  return f;
}

// Smooth field vanishing on the boundary ring.
inline ScalarField smooth_plane_field(const PlaneGrid& g, std::mt19937_64& rng, int modes = 3,
                                      double amp = 1.0) {
  std::uniform_real_distribution<double> U(-amp, amp);
  ScalarField f(g);
  for (int a = 1; a <= modes; ++a)
    for (int b = 1; b <= modes; ++b) {
      const double c = U(rng) / (a * b);
      for (std::size_t j = 0; j < g.n; ++j)
        for (std::size_t i = 0; i < g.n; ++i) {
          const Point x = g.node(i, j);
          f(i, j) += c * std::sin(a * kPi * (x.x + g.R) / (2 * g.R)) *
                     std::sin(b * kPi * (x.y + g.R) / (2 * g.R));
        }
    }
  for (std::size_t j = 0; j < g.n; ++j)
    for (std::size_t i = 0; i < g.n; ++i)
      if (g.on_boundary(i, j)) f(i, j) = 0.0;
  return f;
}

}  // namespace bpsv::testing
