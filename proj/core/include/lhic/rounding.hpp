#pragma once

#include <cmath>
#include <cstdint>

namespace lhic {

// Shared rounding rule for all integer scalings: ties round half away
// from zero (lround semantics).
inline long round_half_away(double v) { return std::lround(v); }

inline std::uint8_t clamp_u8(long v) {
  if (v < 0) return 0;
  if (v > 255) return 255;
  return static_cast<std::uint8_t>(v);
}

}  // namespace lhic
