#pragma once

// Quadrature and norms. Torus integrals are the plain node sum times the cell
// area (exact for trigonometric polynomials); plane integrals use the
// trapezoidal rule on [-R, R]^2. Every reduction goes through a blocked
// pairwise sum, so results depend only on the data and the grid size.

#include <span>

#include "bpsv/grid.hpp"

namespace bpsv {

double pairwise_sum(std::span<const double> a);
double pairwise_dot(std::span<const double> a, std::span<const double> b);

double integrate(const TorusGrid& g, const ScalarField& f);
double integrate(const PlaneGrid& g, const ScalarField& f);

double mean(const TorusGrid& g, const ScalarField& f);
double mean(const PlaneGrid& g, const ScalarField& f);

double inner_product(const TorusGrid& g, const ScalarField& a, const ScalarField& b);
double inner_product(const PlaneGrid& g, const ScalarField& a, const ScalarField& b);

// L2 norms include the area element: norm_l2 = sqrt(integral of f^2).
double norm_l2(const TorusGrid& g, const ScalarField& f);
double norm_l2(const PlaneGrid& g, const ScalarField& f);

double norm_sup(const ScalarField& f);
double max_value(const ScalarField& f);
double sup_diff(const ScalarField& a, const ScalarField& b);

}  // namespace bpsv
