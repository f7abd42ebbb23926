#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "lhic/range_map.hpp"

namespace lhic {

// Layered bitstream layout (all multi-byte integers little-endian):
//
//   offset  size  field
//        0     4  magic "LHIC"
//        4     1  version (currently 1)
//        5     4  width  (original image, before padding)
//        9     4  height
//       13     1  compact_scale
//       14     1  scaling method (0 shift, 1 minmax, 2 clip)
//       15     2  r_min (i16)
//       17     2  r_max (i16)
//       19     1  lossless codec id (base layer)
//       20     1  lossy codec id (enhancement layer)
//       21     8  model hash (FNV-1a 64 of the checkpoint bytes)
//       29     4  base_len,  followed by base_len bytes
//       33+..  4  enh_len,   followed by enh_len bytes
struct LayeredBitstream {
  std::uint8_t version = 1;
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::uint8_t compact_scale = 16;
  ScalingParams scaling;
  std::uint8_t lossless_codec_id = 0;
  std::uint8_t lossy_codec_id = 0;
  std::array<std::uint8_t, 8> model_hash = {};
  std::vector<std::uint8_t> base_layer;
  std::vector<std::uint8_t> enh_layer;  // may be empty (coarse-only stream)

  bool operator==(const LayeredBitstream&) const = default;
};

inline constexpr std::size_t kContainerHeaderSize = 29;  // up to base_len
inline constexpr std::uint8_t kContainerVersion = 1;

std::vector<std::uint8_t> serialize(const LayeredBitstream& b);
LayeredBitstream parse(const std::vector<std::uint8_t>& bytes);

// bits per pixel per channel: 8 * serialized size / (w*h*3).
double bpp(const LayeredBitstream& b, int width, int height);

// FNV-1a 64-bit, used to tie a stream to its model checkpoint.
std::array<std::uint8_t, 8> fnv1a64(const std::vector<std::uint8_t>& bytes);

}  // namespace lhic
