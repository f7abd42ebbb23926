#include "lhic/range_map.hpp"

#include <algorithm>

#include "lhic/rounding.hpp"

namespace lhic {

const char* scaling_method_name(ScalingMethod m) {
  switch (m) {
    case ScalingMethod::Shift: return "shift";
    case ScalingMethod::MinMax: return "minmax";
    case ScalingMethod::Clip: return "clip";
  }
  return "?";
}

ScalingMethod scaling_method_from_name(const std::string& name) {
  if (name == "shift") return ScalingMethod::Shift;
  if (name == "minmax") return ScalingMethod::MinMax;
  if (name == "clip") return ScalingMethod::Clip;
  throw Error(ErrorKind::Usage, "unknown scaling method: " + name);
}

nn::Tensor<float> normalize_u8(const ImageU8& img) {
  nn::Tensor<float> t = nn::Tensor<float>::zeros({1, 3, img.height, img.width});
  for (int c = 0; c < 3; ++c)
    for (int y = 0; y < img.height; ++y)
      for (int x = 0; x < img.width; ++x)
        t.at4(0, c, y, x) = static_cast<float>(img.at(x, y, c)) / 255.0f * 2.0f - 1.0f;
  return t;
}

ImageU8 quantize_normalized(const nn::Tensor<float>& t) {
  if (t.shape.size() != 4 || t.shape[0] != 1 || t.shape[1] != 3)
    throw Error(ErrorKind::Shape, "quantize expects a 1 x 3 x H x W tensor");
  ImageU8 img(t.shape[3], t.shape[2]);
  for (int c = 0; c < 3; ++c)
    for (int y = 0; y < img.height; ++y)
      for (int x = 0; x < img.width; ++x) {
        double v = std::clamp(static_cast<double>(t.at4(0, c, y, x)), -1.0, 1.0);
        img.at(x, y, c) = clamp_u8(round_half_away((v + 1.0) / 2.0 * 255.0));
      }
  return img;
}

namespace {
void check_residual_range(const ResidualImage& r) {
  for (std::int16_t v : r.data)
    if (v < -255 || v > 255)
      throw Error(ErrorKind::Usage, "residual value out of [-255,255]");
}
}  // namespace

ImageU8 scale_shift(const ResidualImage& r) {
  check_residual_range(r);
  ImageU8 u(r.width, r.height);
  for (size_t i = 0; i < r.data.size(); ++i)
    u.data[i] = clamp_u8(round_half_away((r.data[i] + 255.0) / 2.0));
  return u;
}

ResidualImage unscale_shift(const ImageU8& u) {
  ResidualImage r(u.width, u.height);
  for (size_t i = 0; i < u.data.size(); ++i)
    r.data[i] = static_cast<std::int16_t>(2 * static_cast<int>(u.data[i]) - 255);
  return r;
}

ScalingParams minmax_params(const ResidualImage& r) {
  check_residual_range(r);
  ScalingParams p;
  p.method = ScalingMethod::MinMax;
  auto [mn, mx] = std::minmax_element(r.data.begin(), r.data.end());
  p.r_min = *mn;
  p.r_max = *mx;
  return p;
}

ImageU8 scale_minmax(const ResidualImage& r, const ScalingParams& p) {
  if (p.r_min > p.r_max)
    throw Error(ErrorKind::Usage, "scaling params require r_min <= r_max");
  ImageU8 u(r.width, r.height);
  if (p.degenerate()) return u;  // all zero; decoded as the constant r_min
  const double range = static_cast<double>(p.r_max) - p.r_min;
  for (size_t i = 0; i < r.data.size(); ++i) {
    const int v = std::clamp<int>(r.data[i], p.r_min, p.r_max);
    u.data[i] = clamp_u8(round_half_away((v - p.r_min) / range * 255.0));
  }
  return u;
}

ResidualImage unscale_minmax(const ImageU8& u, const ScalingParams& p) {
  if (p.r_min > p.r_max)
    throw Error(ErrorKind::Usage, "scaling params require r_min <= r_max");
  ResidualImage r(u.width, u.height);
  if (p.degenerate()) {
    std::fill(r.data.begin(), r.data.end(), p.r_min);
    return r;
  }
  const double range = static_cast<double>(p.r_max) - p.r_min;
  for (size_t i = 0; i < u.data.size(); ++i)
    r.data[i] = static_cast<std::int16_t>(
        round_half_away(u.data[i] / 255.0 * range) + p.r_min);
  return r;
}

ImageU8 scale_clip(const ResidualImage& r, ScalingParams* params_out,
                   int clip_bound) {
  if (clip_bound < 1 || clip_bound > 255)
    throw Error(ErrorKind::Usage, "clip bound must be in [1,255]");
  check_residual_range(r);
  ScalingParams p;
  p.method = ScalingMethod::Clip;
  p.r_min = static_cast<std::int16_t>(-clip_bound);
  p.r_max = static_cast<std::int16_t>(clip_bound);
  if (params_out) *params_out = p;
  ResidualImage clipped = r;
  for (auto& v : clipped.data)
    v = static_cast<std::int16_t>(std::clamp<int>(v, -clip_bound, clip_bound));
  return scale_minmax(clipped, p);
}

ResidualImage unscale_clip(const ImageU8& u, const ScalingParams& p) {
  return unscale_minmax(u, p);
}

ImageU8 scale_residual(const ResidualImage& r, ScalingMethod m, ScalingParams* p,
                       int clip_bound) {
  switch (m) {
    case ScalingMethod::Shift: {
      if (p) *p = ScalingParams{ScalingMethod::Shift, -255, 255};
      return scale_shift(r);
    }
    case ScalingMethod::MinMax: {
      ScalingParams mp = minmax_params(r);
      if (p) *p = mp;
      return scale_minmax(r, mp);
    }
    case ScalingMethod::Clip:
      return scale_clip(r, p, clip_bound);
  }
  throw Error(ErrorKind::Usage, "unknown scaling method");
}

ResidualImage unscale_residual(const ImageU8& u, const ScalingParams& p) {
  switch (p.method) {
    case ScalingMethod::Shift: return unscale_shift(u);
    case ScalingMethod::MinMax: return unscale_minmax(u, p);
    case ScalingMethod::Clip: return unscale_clip(u, p);
  }
  throw Error(ErrorKind::Format, "unknown scaling method in params");
}

}  // namespace lhic
