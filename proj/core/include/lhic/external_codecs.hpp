#pragma once

#include "lhic/codec.hpp"

namespace lhic {

// Binary locations and limits for the external tool adapters. Paths
// default to the LHIC_FLIF_PATH / LHIC_BPGENC_PATH / LHIC_BPGDEC_PATH
// environment variables, falling back to plain tool names on $PATH.
struct ExternalToolConfig {
  std::string flif_path;
  std::string bpgenc_path;
  std::string bpgdec_path;
  int timeout_ms = 60000;

  static ExternalToolConfig from_env();
};

// Probes whether a binary can be executed at all.
bool tool_available(const std::string& path);

// FLIF lossless adapter; data exchanged through temp PNG files.
class FlifCodec final : public LosslessCodec {
 public:
  explicit FlifCodec(ExternalToolConfig cfg = ExternalToolConfig::from_env());
  std::string name() const override { return "flif"; }
  std::uint8_t id() const override { return kLosslessFlifId; }
  std::vector<std::uint8_t> encode(const ImageU8& img) const override;
  ImageU8 decode(const std::vector<std::uint8_t>& bytes) const override;

 private:
  ExternalToolConfig cfg_;
};

// BPG adapter pinned to RGB444 (bpgenc -f 444 -c rgb -q <q>).
class BpgCodec final : public LossyCodec {
 public:
  explicit BpgCodec(ExternalToolConfig cfg = ExternalToolConfig::from_env());
  std::string name() const override { return "bpg"; }
  std::uint8_t id() const override { return kLossyBpgId; }
  int quality_min() const override { return 0; }
  int quality_max() const override { return 51; }
  std::vector<std::uint8_t> encode(const ImageU8& img, int quality) const override;
  ImageU8 decode(const std::vector<std::uint8_t>& bytes) const override;

 private:
  ExternalToolConfig cfg_;
};

}  // namespace lhic
