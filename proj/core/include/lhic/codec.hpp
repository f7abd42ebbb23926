#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "lhic/image.hpp"

namespace lhic {

// Base-layer codec; decode(encode(img)) must be bit-exact.
class LosslessCodec {
 public:
  virtual ~LosslessCodec() = default;
  virtual std::string name() const = 0;
  virtual std::uint8_t id() const = 0;
  virtual std::vector<std::uint8_t> encode(const ImageU8& img) const = 0;
  virtual ImageU8 decode(const std::vector<std::uint8_t>& bytes) const = 0;
};

// Enhancement-layer codec; must preserve dimensions and decode its own
// output deterministically.
class LossyCodec {
 public:
  virtual ~LossyCodec() = default;
  virtual std::string name() const = 0;
  virtual std::uint8_t id() const = 0;
  // Inclusive quality domain; meaning is codec specific.
  virtual int quality_min() const = 0;
  virtual int quality_max() const = 0;
  virtual std::vector<std::uint8_t> encode(const ImageU8& img, int quality) const = 0;
  virtual ImageU8 decode(const std::vector<std::uint8_t>& bytes) const = 0;
};

// Stable 1-byte ids persisted in the container header.
inline constexpr std::uint8_t kLosslessBuiltinId = 1;
inline constexpr std::uint8_t kLosslessFlifId = 2;
inline constexpr std::uint8_t kLossyBuiltinId = 1;
inline constexpr std::uint8_t kLossyBpgId = 2;
inline constexpr std::uint8_t kLossyViaLosslessId = 3;

// Factories; names: "builtin", "flif" / "builtin", "bpg", "lossless".
std::unique_ptr<LosslessCodec> make_lossless_codec(const std::string& name);
std::unique_ptr<LossyCodec> make_lossy_codec(const std::string& name);
std::unique_ptr<LosslessCodec> lossless_codec_by_id(std::uint8_t id);
std::unique_ptr<LossyCodec> lossy_codec_by_id(std::uint8_t id);

}  // namespace lhic
