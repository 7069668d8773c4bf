#include <cstdlib>
#include <string_view>

#include "bpsv/kernels.hpp"

namespace bpsv::kernels {

const KernelTable& active() noexcept {
  static const KernelTable* chosen = [] {
    const char* env = std::getenv("BPSV_KERNELS");
    const std::string_view want = env ? env : "";
    if (want == "scalar") return &scalar_table();
    const KernelTable* simd = avx2_table();
    return simd ? simd : &scalar_table();
  }();
  return *chosen;
}

}  // namespace bpsv::kernels
