#include <bit>
#include <cmath>
#include <cstdint>

#include "bpsv/kernels.hpp"
#include "exp_constants.hpp"

namespace bpsv::kernels {
namespace {

using namespace detail;

double pow2(std::int64_t k) { return std::bit_cast<double>(static_cast<std::uint64_t>(k + 1023) << 52); }

double exp_one(double x) {
  if (x != x) return x;
  x = (kExpLo > x) ? kExpLo : x;
  x = (kExpHi < x) ? kExpHi : x;
  const double kd = std::nearbyint(x * kLog2e);
  const double r = (x - kd * kLn2Hi) - kd * kLn2Lo;
  double p = kTaylor[13];
  for (int j = 12; j >= 0; --j) p = p * r + kTaylor[j];
  const auto k = static_cast<std::int64_t>(kd);
  const std::int64_t k1 = k >> 1;
  const std::int64_t k2 = k - k1;
  return (p * pow2(k1)) * pow2(k2);
}

void exp_scaled(const double* x, const double* scale, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double e = exp_one(x[i]);
    out[i] = scale ? scale[i] * e : e;
  }
}

double block_sum(const double* a, std::size_t n) {
  double lane[4] = {0.0, 0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) lane[i % 4] += a[i];
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

double block_dot(const double* a, const double* b, std::size_t n) {
  double lane[4] = {0.0, 0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) lane[i % 4] += a[i] * b[i];
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

void axpby(double a, const double* x, double b, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = a * x[i] + b * y[i];
}

double max_value(const double* a, std::size_t n) {
  double m = -HUGE_VAL;
  for (std::size_t i = 0; i < n; ++i) m = (m > a[i]) ? m : a[i];
  return m;
}

double max_abs(const double* a, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = std::fabs(a[i]);
    m = (m > v) ? m : v;
  }
  return m;
}

void stencil5(const double* in, double* out, std::size_t nx, std::size_t ny, double cx, double cy,
              double boundary) {
  for (std::size_t i = 0; i < nx; ++i) {
    out[i] = 0.0;
    out[(ny - 1) * nx + i] = 0.0;
  }
  for (std::size_t j = 1; j + 1 < ny; ++j) {
    const double* row = in + j * nx;
    const double* dn = in + (j - 1) * nx;
    const double* up = in + (j + 1) * nx;
    const bool dn_ghost = (j == 1);
    const bool up_ghost = (j + 2 == ny);
    double* o = out + j * nx;
    o[0] = 0.0;
    o[nx - 1] = 0.0;
    for (std::size_t i = 1; i + 1 < nx; ++i) {
      const double c = row[i];
      const double l = (i == 1) ? boundary : row[i - 1];
      const double r = (i + 2 == nx) ? boundary : row[i + 1];
      const double d = dn_ghost ? boundary : dn[i];
      const double u = up_ghost ? boundary : up[i];
      const double c2 = c + c;
      o[i] = ((l + r) - c2) * cx + ((d + u) - c2) * cy;
    }
  }
}

void scale_spectrum(double* c, const double* factor, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    c[2 * i] *= factor[i];
    c[2 * i + 1] *= factor[i];
  }
}

void hessian_combine(double s, const double* lap_du, const double* lap_df, const double* du,
                     const double* df, const double* a, const double* b, double* out_u,
                     double* out_f, std::size_t n) {
  const double hs = s * 0.5;
  for (std::size_t i = 0; i < n; ++i) {
    out_u[i] = (a[i] * du[i] - b[i] * df[i]) - s * lap_du[i];
    out_f[i] = b[i] * (df[i] - du[i]) - hs * lap_df[i];
  }
}

}  // namespace

const KernelTable& scalar_table() noexcept {
  static const KernelTable table{"scalar",  &exp_scaled, &block_sum,      &block_dot,
                                 &axpby,    &max_value,  &max_abs,        &stencil5,
                                 &scale_spectrum,        &hessian_combine};
  return table;
}

}  // namespace bpsv::kernels
