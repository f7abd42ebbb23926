#include "lhic/pipeline.hpp"

#include "lhic/checkpoint.hpp"
#include "lhic/range_map.hpp"

namespace lhic {

namespace {

using Graphf = nn::Graph<float>;
using Model = nn::Autoencoder<float>;

// RecNet on an already-quantized compact image.
ImageU8 run_recnet(const ImageU8& compact, const Model& model) {
  Graphf g;
  Model::ParamIds ids;
  Graphf::ValueId c = g.input(normalize_u8(compact));
  Graphf::ValueId y = model.recnet(g, c, {}, ids);
  return quantize_normalized(g.value(y));
}

ImageU8 run_compnet(const ImageU8& padded, const Model& model) {
  Graphf g;
  Model::ParamIds ids;
  Graphf::ValueId x = g.input(normalize_u8(padded));
  Graphf::ValueId c = model.compnet(g, x, {}, ids);
  return quantize_normalized(g.value(c));
}

}  // namespace

ImageU8 compact_image(const ImageU8& x, const Model& model) {
  return run_compnet(reflect_pad_to_multiple(x, model.config().compact_scale), model);
}

ImageU8 coarse_reconstruction(const ImageU8& x, const Model& model) {
  const ImageU8 padded = reflect_pad_to_multiple(x, model.config().compact_scale);
  const ImageU8 coarse = run_recnet(run_compnet(padded, model), model);
  return crop(coarse, x.width, x.height);
}

LayeredBitstream encode(const ImageU8& x, const Model& model,
                        const EncodeOptions& opts) {
  const int s = model.config().compact_scale;
  const ImageU8 padded = reflect_pad_to_multiple(x, s);

  ImageU8 compact;
  try {
    compact = run_compnet(padded, model);
  } catch (const Error& e) {
    throw Error(e.kind(), std::string("encode [compnet]: ") + e.what());
  }

  LayeredBitstream b;
  b.width = static_cast<std::uint32_t>(x.width);
  b.height = static_cast<std::uint32_t>(x.height);
  b.compact_scale = static_cast<std::uint8_t>(s);
  b.model_hash = model_hash(model);

  const auto lossless = make_lossless_codec(opts.lossless_codec);
  b.lossless_codec_id = lossless->id();
  try {
    b.base_layer = lossless->encode(compact);
  } catch (const Error& e) {
    throw Error(e.kind(), std::string("encode [base layer]: ") + e.what());
  }

  if (opts.skip_enhancement) {
    b.scaling = ScalingParams{opts.scaling, 0, 0};
    b.lossy_codec_id = 0;
    return b;
  }

  const ImageU8 coarse = run_recnet(compact, model);
  const ResidualImage r = residual(padded, coarse);
  ScalingParams params;
  const ImageU8 scaled = scale_residual(r, opts.scaling, &params, opts.clip_bound);
  b.scaling = params;

  const auto lossy = make_lossy_codec(opts.lossy_codec);
  b.lossy_codec_id = lossy->id();
  try {
    b.enh_layer = lossy->encode(scaled, opts.lossy_quality);
  } catch (const Error& e) {
    throw Error(e.kind(), std::string("encode [enhancement layer]: ") + e.what());
  }
  return b;
}

ImageU8 decode(const LayeredBitstream& b, const Model& model, bool force) {
  if (!force && b.model_hash != model_hash(model))
    throw Error(ErrorKind::ModelMismatch,
                "bitstream was produced with a different model checkpoint "
                "(pass force to decode anyway)");
  if (b.compact_scale != model.config().compact_scale)
    throw Error(ErrorKind::ModelMismatch,
                "bitstream compact_scale does not match the model");

  const auto lossless = lossless_codec_by_id(b.lossless_codec_id);
  ImageU8 compact;
  try {
    compact = lossless->decode(b.base_layer);
  } catch (const Error& e) {
    throw Error(e.kind(), std::string("decode [base layer]: ") + e.what());
  }
  const ImageU8 coarse = run_recnet(compact, model);

  ImageU8 out;
  if (b.enh_layer.empty()) {
    out = coarse;
  } else {
    const auto lossy = lossy_codec_by_id(b.lossy_codec_id);
    ImageU8 scaled;
    try {
      scaled = lossy->decode(b.enh_layer);
    } catch (const Error& e) {
      throw Error(e.kind(), std::string("decode [enhancement layer]: ") + e.what());
    }
    const ResidualImage r = unscale_residual(scaled, b.scaling);
    out = add_residual(coarse, r);
  }
  return crop(out, static_cast<int>(b.width), static_cast<int>(b.height));
}

QualityReport evaluate(const ImageU8& original, const ImageU8& reconstruction,
                       const LayeredBitstream* stream) {
  QualityReport rep;
  rep.psnr_db = psnr(original, reconstruction);
  rep.ms_ssim = ms_ssim(original, reconstruction);
  if (stream) rep.bpp = bpp(*stream, original.width, original.height);
  return rep;
}

}  // namespace lhic
