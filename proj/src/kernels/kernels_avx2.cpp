#include "bpsv/kernels.hpp"

#if defined(__AVX2__)

#include <immintrin.h>

#include <bit>
#include <cmath>
#include <cstdint>

#include "exp_constants.hpp"

namespace bpsv::kernels {
namespace {

using namespace detail;

inline __m256d pow2(__m128i k) {
  const __m256i biased = _mm256_cvtepi32_epi64(_mm_add_epi32(k, _mm_set1_epi32(1023)));
  return _mm256_castsi256_pd(_mm256_slli_epi64(biased, 52));
}

inline __m256d exp4(__m256d x) {
  x = _mm256_max_pd(_mm256_set1_pd(kExpLo), x);
  x = _mm256_min_pd(_mm256_set1_pd(kExpHi), x);
  const __m256d kd = _mm256_round_pd(_mm256_mul_pd(x, _mm256_set1_pd(kLog2e)),
                                     _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  const __m256d r = _mm256_sub_pd(_mm256_sub_pd(x, _mm256_mul_pd(kd, _mm256_set1_pd(kLn2Hi))),
                                  _mm256_mul_pd(kd, _mm256_set1_pd(kLn2Lo)));
  __m256d p = _mm256_set1_pd(kTaylor[13]);
  for (int j = 12; j >= 0; --j) p = _mm256_add_pd(_mm256_mul_pd(p, r), _mm256_set1_pd(kTaylor[j]));
  const __m128i k = _mm256_cvtpd_epi32(kd);
  const __m128i k1 = _mm_srai_epi32(k, 1);
  const __m128i k2 = _mm_sub_epi32(k, k1);
  return _mm256_mul_pd(_mm256_mul_pd(p, pow2(k1)), pow2(k2));
}

void exp_scaled(const double* x, const double* scale, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d e = exp4(_mm256_loadu_pd(x + i));
    if (scale) e = _mm256_mul_pd(_mm256_loadu_pd(scale + i), e);
    _mm256_storeu_pd(out + i, e);
  }
  if (i < n) {
    double xb[4] = {0.0, 0.0, 0.0, 0.0};
    double eb[4];
    for (std::size_t t = i; t < n; ++t) xb[t - i] = x[t];
    _mm256_storeu_pd(eb, exp4(_mm256_loadu_pd(xb)));
    for (std::size_t t = i; t < n; ++t) {
      const double e = (x[t] != x[t]) ? x[t] : eb[t - i];
      out[t] = scale ? scale[t] * e : e;
    }
  }
}

inline double combine_lanes(__m256d acc, const double* tail, std::size_t tail_n) {
  alignas(32) double lane[4];
  _mm256_store_pd(lane, acc);
  for (std::size_t t = 0; t < tail_n; ++t) lane[t] += tail[t];
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

double block_sum(const double* a, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(a + i));
  return combine_lanes(acc, a + i, n - i);
}

double block_dot(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  double tail[4];
  for (std::size_t t = i; t < n; ++t) tail[t - i] = a[t] * b[t];
  return combine_lanes(acc, tail, n - i);
}

void axpby(double a, const double* x, double b, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  const __m256d vb = _mm256_set1_pd(b);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d ax = _mm256_mul_pd(va, _mm256_loadu_pd(x + i));
    const __m256d by = _mm256_mul_pd(vb, _mm256_loadu_pd(y + i));
    _mm256_storeu_pd(y + i, _mm256_add_pd(ax, by));
  }
  for (; i < n; ++i) y[i] = a * x[i] + b * y[i];
}

double max_value(const double* a, std::size_t n) {
  __m256d m = _mm256_set1_pd(-HUGE_VAL);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) m = _mm256_max_pd(m, _mm256_loadu_pd(a + i));
  alignas(32) double lane[4];
  _mm256_store_pd(lane, m);
  double r = lane[0];
  for (int t = 1; t < 4; ++t) r = (r > lane[t]) ? r : lane[t];
  for (; i < n; ++i) r = (r > a[i]) ? r : a[i];
  return r;
}

double max_abs(const double* a, std::size_t n) {
  const __m256d sign = _mm256_set1_pd(-0.0);
  __m256d m = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) m = _mm256_max_pd(m, _mm256_andnot_pd(sign, _mm256_loadu_pd(a + i)));
  alignas(32) double lane[4];
  _mm256_store_pd(lane, m);
  double r = lane[0];
  for (int t = 1; t < 4; ++t) r = (r > lane[t]) ? r : lane[t];
  for (; i < n; ++i) {
    const double v = std::fabs(a[i]);
    r = (r > v) ? r : v;
  }
  return r;
}

void stencil5(const double* in, double* out, std::size_t nx, std::size_t ny, double cx, double cy,
              double boundary) {
  for (std::size_t i = 0; i < nx; ++i) {
    out[i] = 0.0;
    out[(ny - 1) * nx + i] = 0.0;
  }
  const __m256d vcx = _mm256_set1_pd(cx);
  const __m256d vcy = _mm256_set1_pd(cy);
  const __m256d vb = _mm256_set1_pd(boundary);
  for (std::size_t j = 1; j + 1 < ny; ++j) {
    const double* row = in + j * nx;
    const double* dn = in + (j - 1) * nx;
    const double* up = in + (j + 1) * nx;
    const bool dn_ghost = (j == 1);
    const bool up_ghost = (j + 2 == ny);
    double* o = out + j * nx;
    o[0] = 0.0;
    o[nx - 1] = 0.0;

    auto scalar_at = [&](std::size_t i) {
      const double c = row[i];
      const double l = (i == 1) ? boundary : row[i - 1];
      const double r = (i + 2 == nx) ? boundary : row[i + 1];
      const double d = dn_ghost ? boundary : dn[i];
      const double u = up_ghost ? boundary : up[i];
      const double c2 = c + c;
      o[i] = ((l + r) - c2) * cx + ((d + u) - c2) * cy;
    };

    // Columns 2 .. nx-3 have both horizontal neighbours in the interior.
    scalar_at(1);
    std::size_t i = 2;
    for (; i + 4 <= nx - 2; i += 4) {
      const __m256d c = _mm256_loadu_pd(row + i);
      const __m256d l = _mm256_loadu_pd(row + i - 1);
      const __m256d r = _mm256_loadu_pd(row + i + 1);
      const __m256d d = dn_ghost ? vb : _mm256_loadu_pd(dn + i);
      const __m256d u = up_ghost ? vb : _mm256_loadu_pd(up + i);
      const __m256d c2 = _mm256_add_pd(c, c);
      const __m256d h = _mm256_mul_pd(_mm256_sub_pd(_mm256_add_pd(l, r), c2), vcx);
      const __m256d v = _mm256_mul_pd(_mm256_sub_pd(_mm256_add_pd(d, u), c2), vcy);
      _mm256_storeu_pd(o + i, _mm256_add_pd(h, v));
    }
    for (; i + 1 < nx; ++i) scalar_at(i);
  }
}

void scale_spectrum(double* c, const double* factor, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d f = _mm256_set_pd(factor[i + 1], factor[i + 1], factor[i], factor[i]);
    _mm256_storeu_pd(c + 2 * i, _mm256_mul_pd(_mm256_loadu_pd(c + 2 * i), f));
  }
  for (; i < n; ++i) {
    c[2 * i] *= factor[i];
    c[2 * i + 1] *= factor[i];
  }
}

void hessian_combine(double s, const double* lap_du, const double* lap_df, const double* du,
                     const double* df, const double* a, const double* b, double* out_u,
                     double* out_f, std::size_t n) {
  const double hs = s * 0.5;
  const __m256d vs = _mm256_set1_pd(s);
  const __m256d vhs = _mm256_set1_pd(hs);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vdu = _mm256_loadu_pd(du + i);
    const __m256d vdf = _mm256_loadu_pd(df + i);
    const __m256d va = _mm256_loadu_pd(a + i);
    const __m256d vb = _mm256_loadu_pd(b + i);
    const __m256d pu = _mm256_sub_pd(_mm256_mul_pd(va, vdu), _mm256_mul_pd(vb, vdf));
    _mm256_storeu_pd(out_u + i, _mm256_sub_pd(pu, _mm256_mul_pd(vs, _mm256_loadu_pd(lap_du + i))));
    const __m256d pf = _mm256_mul_pd(vb, _mm256_sub_pd(vdf, vdu));
    _mm256_storeu_pd(out_f + i, _mm256_sub_pd(pf, _mm256_mul_pd(vhs, _mm256_loadu_pd(lap_df + i))));
  }
  for (; i < n; ++i) {
    out_u[i] = (a[i] * du[i] - b[i] * df[i]) - s * lap_du[i];
    out_f[i] = b[i] * (df[i] - du[i]) - hs * lap_df[i];
  }
}

}  // namespace

const KernelTable* avx2_table() noexcept {
  static const KernelTable table{"avx2",    &exp_scaled, &block_sum,      &block_dot,
                                 &axpby,    &max_value,  &max_abs,        &stencil5,
                                 &scale_spectrum,        &hessian_combine};
  static const bool supported = __builtin_cpu_supports("avx2");
  return supported ? &table : nullptr;
}

}  // namespace bpsv::kernels

#else

namespace bpsv::kernels {
const KernelTable* avx2_table() noexcept { return nullptr; }
}  // namespace bpsv::kernels

#endif
