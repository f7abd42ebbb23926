#pragma once

#include <memory>
#include <string>

#include "lhic/codec.hpp"
#include "lhic/container.hpp"
#include "lhic/metrics.hpp"
#include "lhic/model.hpp"

namespace lhic {

struct EncodeOptions {
  ScalingMethod scaling = ScalingMethod::Clip;
  int clip_bound = kDefaultClipBound;
  int lossy_quality = 4;
  std::string lossless_codec = "builtin";
  std::string lossy_codec = "builtin";
  bool skip_enhancement = false;  // emit a coarse-only stream
};

// Full encoder: base layer = lossless(compact image), enhancement
// layer = lossy(scaled residual). The input is reflect-padded to a
// multiple of compact_scale; original dims go in the header.
LayeredBitstream encode(const ImageU8& x, const nn::Autoencoder<float>& model,
                        const EncodeOptions& opts);

// Decoder; refuses a model-hash mismatch unless force is set.
ImageU8 decode(const LayeredBitstream& b, const nn::Autoencoder<float>& model,
               bool force = false);

// Coarse reconstruction x' alone (RecNet output for the quantized
// compact code), on the padded canvas cropped back to x dims.
ImageU8 coarse_reconstruction(const ImageU8& x, const nn::Autoencoder<float>& model);

// Compact code of x after hard quantization, as an ordinary image.
ImageU8 compact_image(const ImageU8& x, const nn::Autoencoder<float>& model);

QualityReport evaluate(const ImageU8& original, const ImageU8& reconstruction,
                       const LayeredBitstream* stream = nullptr);

}  // namespace lhic
