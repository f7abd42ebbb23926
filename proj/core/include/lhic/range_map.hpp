#pragma once

#include <cstdint>

#include "lhic/image.hpp"
#include "lhic/tensor.hpp"

namespace lhic {

enum class ScalingMethod : std::uint8_t { Shift = 0, MinMax = 1, Clip = 2 };

const char* scaling_method_name(ScalingMethod m);
ScalingMethod scaling_method_from_name(const std::string& name);

// Side information needed to invert a residual scaling. For Shift the
// bounds are the implied (-255, 255); for Clip the fixed clip bounds.
// r_min == r_max marks a degenerate flat residual decoded as a constant.
struct ScalingParams {
  ScalingMethod method = ScalingMethod::Shift;
  std::int16_t r_min = -255;
  std::int16_t r_max = 255;

  bool degenerate() const { return r_min == r_max; }
  bool operator==(const ScalingParams&) const = default;
};

inline constexpr int kDefaultClipBound = 120;

// x/255*2 - 1, elementwise; output is 1 x 3 x H x W.
nn::Tensor<float> normalize_u8(const ImageU8& img);

// round((v+1)/2*255) on a 1 x 3 x H x W tensor; values outside [-1,1]
// are clamped.
ImageU8 quantize_normalized(const nn::Tensor<float>& t);

// Residual scalings into [0,255] and their inverses.
ImageU8 scale_shift(const ResidualImage& r);
ResidualImage unscale_shift(const ImageU8& u);

ScalingParams minmax_params(const ResidualImage& r);
ImageU8 scale_minmax(const ResidualImage& r, const ScalingParams& p);
ResidualImage unscale_minmax(const ImageU8& u, const ScalingParams& p);

ImageU8 scale_clip(const ResidualImage& r, ScalingParams* params_out,
                   int clip_bound = kDefaultClipBound);
ResidualImage unscale_clip(const ImageU8& u, const ScalingParams& p);

// Dispatch helpers used by the pipeline.
ImageU8 scale_residual(const ResidualImage& r, ScalingMethod m, ScalingParams* p,
                       int clip_bound = kDefaultClipBound);
ResidualImage unscale_residual(const ImageU8& u, const ScalingParams& p);

}  // namespace lhic
