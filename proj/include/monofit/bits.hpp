#pragma once

#include <bit>
#include <cstdint>

namespace monofit {

// A point of {0,1}^d and a subset S of [d] share one representation: a
// 64-bit mask whose bit i (0-based) holds coordinate i+1. Truth tables are
// indexed by the point's mask. Bits at positions >= d must be zero.
using Mask = std::uint64_t;

inline constexpr int kMaxDim = 64;       // one machine word per point
inline constexpr int kMaxDenseDim = 20;  // dense tables: 2^20 doubles = 8 MiB

inline constexpr Mask full_mask(int dim) {
    return dim >= 64 ? ~Mask{0} : (Mask{1} << dim) - 1;
}

inline int popcount(Mask m) { return std::popcount(m); }

// Coordinate i is 1-based throughout the public API; bit positions are 0-based.
inline bool get_bit(Mask m, int pos) { return (m >> pos) & 1; }

// Exact C(n, k), saturating to UINT64_MAX on overflow (n up to 64 stays exact
// for every k except the full 2^64 row sum).
std::uint64_t binomial(int n, int k);

}  // namespace monofit
