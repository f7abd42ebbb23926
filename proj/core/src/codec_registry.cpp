#include "lhic/builtin_codecs.hpp"
#include "lhic/codec.hpp"
#include "lhic/external_codecs.hpp"

namespace lhic {

std::unique_ptr<LosslessCodec> make_lossless_codec(const std::string& name) {
  if (name == "builtin") return std::make_unique<BuiltinLossless>();
  if (name == "flif") return std::make_unique<FlifCodec>();
  throw Error(ErrorKind::Usage, "unknown lossless codec: " + name);
}

std::unique_ptr<LossyCodec> make_lossy_codec(const std::string& name) {
  if (name == "builtin") return std::make_unique<BuiltinLossy>();
  if (name == "bpg") return std::make_unique<BpgCodec>();
  if (name == "lossless") return std::make_unique<LosslessAsLossy>();
  throw Error(ErrorKind::Usage, "unknown lossy codec: " + name);
}

std::unique_ptr<LosslessCodec> lossless_codec_by_id(std::uint8_t id) {
  switch (id) {
    case kLosslessBuiltinId: return std::make_unique<BuiltinLossless>();
    case kLosslessFlifId: return std::make_unique<FlifCodec>();
  }
  throw Error(ErrorKind::Format, "unknown lossless codec id " + std::to_string(id));
}

std::unique_ptr<LossyCodec> lossy_codec_by_id(std::uint8_t id) {
  switch (id) {
    case kLossyBuiltinId: return std::make_unique<BuiltinLossy>();
    case kLossyBpgId: return std::make_unique<BpgCodec>();
    case kLossyViaLosslessId: return std::make_unique<LosslessAsLossy>();
  }
  throw Error(ErrorKind::Format, "unknown lossy codec id " + std::to_string(id));
}

}  // namespace lhic
