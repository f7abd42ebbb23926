#pragma once

#include "lhic/codec.hpp"

namespace lhic {

// Paeth-predicted, deflate-compressed lossless coder. Hermetic stand-in
// for FLIF so the whole suite runs without external tools.
class BuiltinLossless final : public LosslessCodec {
 public:
  std::string name() const override { return "builtin"; }
  std::uint8_t id() const override { return kLosslessBuiltinId; }
  std::vector<std::uint8_t> encode(const ImageU8& img) const override;
  ImageU8 decode(const std::vector<std::uint8_t>& bytes) const override;
};

// 8x8 block DCT with a uniform AC quantizer; quality is the quantizer
// step (>= 1). DC coefficients are stored at unit step, so very large
// steps degrade to a blockwise-DC image. Hermetic stand-in for BPG.
class BuiltinLossy final : public LossyCodec {
 public:
  std::string name() const override { return "builtin"; }
  std::uint8_t id() const override { return kLossyBuiltinId; }
  int quality_min() const override { return 1; }
  int quality_max() const override { return 100000; }
  std::vector<std::uint8_t> encode(const ImageU8& img, int quality) const override;
  ImageU8 decode(const std::vector<std::uint8_t>& bytes) const override;
};

// LosslessCodec wrapped behind the LossyCodec interface (quality is
// ignored). Enables the exact-inversion enhancement-layer path.
class LosslessAsLossy final : public LossyCodec {
 public:
  std::string name() const override { return "lossless"; }
  std::uint8_t id() const override { return kLossyViaLosslessId; }
  int quality_min() const override { return 0; }
  int quality_max() const override { return 100000; }
  std::vector<std::uint8_t> encode(const ImageU8& img, int quality) const override;
  ImageU8 decode(const std::vector<std::uint8_t>& bytes) const override;
};

}  // namespace lhic
