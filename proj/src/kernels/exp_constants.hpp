#pragma once

// Shared constants for the exp kernels: Cody-Waite reduction x = k ln2 + r,
// then a degree-13 Taylor polynomial on |r| <= ln2/2 (truncation < 1e-17).
namespace bpsv::kernels::detail {

inline constexpr double kLog2e = 1.4426950408889634074;
inline constexpr double kLn2Hi = 6.93147180369123816490e-01;  // 32 trailing zero bits
inline constexpr double kLn2Lo = 1.90821492927058770002e-10;
inline constexpr double kExpLo = -746.0;  // below: result rounds to +0
inline constexpr double kExpHi = 710.0;   // above: result overflows to +inf

inline constexpr double kTaylor[14] = {
    1.0,
    1.0,
    1.0 / 2.0,
    1.0 / 6.0,
    1.0 / 24.0,
    1.0 / 120.0,
    1.0 / 720.0,
    1.0 / 5040.0,
    1.0 / 40320.0,
    1.0 / 362880.0,
    1.0 / 3628800.0,
    1.0 / 39916800.0,
    1.0 / 479001600.0,
    1.0 / 6227020800.0,
};

}  // namespace bpsv::kernels::detail
