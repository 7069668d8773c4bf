#include "bpsv/field_ops.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <vector>

#include "bpsv/kernels.hpp"

namespace bpsv {
namespace {

using kernels::kPairwiseBlock;

double sum_rec(const double* a, std::size_t n) {
  if (n <= kPairwiseBlock) return kernels::active().block_sum(a, n);
  const std::size_t half = ((n / kPairwiseBlock + 1) / 2) * kPairwiseBlock;
  return sum_rec(a, half) + sum_rec(a + half, n - half);
}

double dot_rec(const double* a, const double* b, std::size_t n) {
  if (n <= kPairwiseBlock) return kernels::active().block_dot(a, b, n);
  const std::size_t half = ((n / kPairwiseBlock + 1) / 2) * kPairwiseBlock;
  return dot_rec(a, b, half) + dot_rec(a + half, b + half, n - half);
}

// Trapezoid weights on the plane: 1 inside, 1/2 on edges, 1/4 at corners.
double trapezoid_sum(const PlaneGrid& g, const ScalarField& f) {
  const std::size_t n = g.n;
  const double all = pairwise_sum(f.values());
  std::vector<double> edge;
  edge.reserve(4 * n);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    edge.push_back(f(i, 0));
    edge.push_back(f(i, n - 1));
    edge.push_back(f(0, i));
    edge.push_back(f(n - 1, i));
  }
  const double corners = (f(0, 0) + f(n - 1, 0)) + (f(0, n - 1) + f(n - 1, n - 1));
  return all - 0.5 * pairwise_sum(edge) - 0.75 * corners;
}

}  // namespace

double pairwise_sum(std::span<const double> a) { return sum_rec(a.data(), a.size()); }

double pairwise_dot(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  return dot_rec(a.data(), b.data(), a.size());
}

double integrate(const TorusGrid& g, const ScalarField& f) { return pairwise_sum(f.values()) * g.cell(); }

double integrate(const PlaneGrid& g, const ScalarField& f) {
  const double h = g.h();
  return trapezoid_sum(g, f) * (h * h);
}

double mean(const TorusGrid& g, const ScalarField& f) { return integrate(g, f) / g.area(); }

double mean(const PlaneGrid& g, const ScalarField& f) {
  const double side = 2.0 * g.R;
  return integrate(g, f) / (side * side);
}

double inner_product(const TorusGrid& g, const ScalarField& a, const ScalarField& b) {
  return pairwise_dot(a.values(), b.values()) * g.cell();
}

double inner_product(const PlaneGrid& g, const ScalarField& a, const ScalarField& b) {
  const std::size_t n = g.n;
  const double all = pairwise_dot(a.values(), b.values());
  std::vector<double> edge;
  edge.reserve(4 * n);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    edge.push_back(a(i, 0) * b(i, 0));
    edge.push_back(a(i, n - 1) * b(i, n - 1));
    edge.push_back(a(0, i) * b(0, i));
    edge.push_back(a(n - 1, i) * b(n - 1, i));
  }
  const double corners = (a(0, 0) * b(0, 0) + a(n - 1, 0) * b(n - 1, 0)) +
                         (a(0, n - 1) * b(0, n - 1) + a(n - 1, n - 1) * b(n - 1, n - 1));
  const double h = g.h();
  return (all - 0.5 * pairwise_sum(edge) - 0.75 * corners) * (h * h);
}

double norm_l2(const TorusGrid& g, const ScalarField& f) { return std::sqrt(inner_product(g, f, f)); }
double norm_l2(const PlaneGrid& g, const ScalarField& f) { return std::sqrt(inner_product(g, f, f)); }

double norm_sup(const ScalarField& f) { return kernels::active().max_abs(f.data(), f.size()); }
double max_value(const ScalarField& f) { return kernels::active().max_value(f.data(), f.size()); }

double sup_diff(const ScalarField& a, const ScalarField& b) {
  assert(a.same_shape(b));
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::fabs(a[k] - b[k]));
  return m;
}

}  // namespace bpsv
