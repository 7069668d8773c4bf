#pragma once

// Data-parallel inner loops. Every kernel has a portable scalar reference and
// an AVX2 variant; the active table is chosen once at first use from the CPU
// feature set (override with BPSV_KERNELS=scalar|avx2). Both variants perform
// the same floating-point operations in the same order, so their outputs are
// bitwise identical (tests/test_kernels.cpp holds them to that).

#include <cstddef>
#include <string_view>

namespace bpsv::kernels {

struct KernelTable {
  std::string_view name;

  // out[i] = scale[i] * exp(x[i]); scale may be null (treated as 1).
  void (*exp_scaled)(const double* x, const double* scale, double* out, std::size_t n);

  // Four-lane strided accumulation, lanes combined as (l0 + l1) + (l2 + l3).
  double (*block_sum)(const double* a, std::size_t n);
  double (*block_dot)(const double* a, const double* b, std::size_t n);

  // y[i] = a * x[i] + b * y[i]
  void (*axpby)(double a, const double* x, double b, double* y, std::size_t n);

  double (*max_value)(const double* a, std::size_t n);
  double (*max_abs)(const double* a, std::size_t n);

  // Five-point Laplacian on an nx-by-ny node array whose outer ring holds
  // Dirichlet data; the ring is read as the constant `boundary`, and output
  // ring entries are set to zero. cx = 1/dx^2, cy = 1/dy^2.
  void (*stencil5)(const double* in, double* out, std::size_t nx, std::size_t ny, double cx,
                   double cy, double boundary);

  // Interleaved complex array c[2i], c[2i+1] multiplied by real factor[i].
  void (*scale_spectrum)(double* c, const double* factor, std::size_t n);

  // Pointwise part of a Hessian-vector product:
  //   out_u = (a*du - b*df) - s*lap_du
  //   out_f = b*(df - du) - (s/2)*lap_df
  void (*hessian_combine)(double s, const double* lap_du, const double* lap_df, const double* du,
                          const double* df, const double* a, const double* b, double* out_u,
                          double* out_f, std::size_t n);
};

const KernelTable& scalar_table() noexcept;

// Returns nullptr when the binary was built without AVX2 support or the CPU
// lacks it.
const KernelTable* avx2_table() noexcept;

const KernelTable& active() noexcept;

// Block size used by the pairwise reductions in field_ops; exposed for tests.
inline constexpr std::size_t kPairwiseBlock = 512;

}  // namespace bpsv::kernels
