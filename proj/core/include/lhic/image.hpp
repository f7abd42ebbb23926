#pragma once

#include <cstdint>
#include <vector>

#include "lhic/error.hpp"
#include "lhic/tensor.hpp"

namespace lhic {

// Interleaved 8-bit RGB image.
struct ImageU8 {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;  // height*width*3, row-major RGB

  ImageU8() = default;
  ImageU8(int w, int h) : width(w), height(h), data(static_cast<size_t>(w) * h * 3, 0) {
    if (w < 1 || h < 1) throw Error(ErrorKind::Shape, "image dims must be >= 1");
  }

  std::uint8_t& at(int x, int y, int c) {
    return data[(static_cast<size_t>(y) * width + x) * 3 + c];
  }
  std::uint8_t at(int x, int y, int c) const {
    return data[(static_cast<size_t>(y) * width + x) * 3 + c];
  }

  bool operator==(const ImageU8&) const = default;
};

// Signed per-pixel difference, values in [-255, 255].
struct ResidualImage {
  int width = 0;
  int height = 0;
  std::vector<std::int16_t> data;

  ResidualImage() = default;
  ResidualImage(int w, int h)
      : width(w), height(h), data(static_cast<size_t>(w) * h * 3, 0) {}

  std::int16_t& at(int x, int y, int c) {
    return data[(static_cast<size_t>(y) * width + x) * 3 + c];
  }
  std::int16_t at(int x, int y, int c) const {
    return data[(static_cast<size_t>(y) * width + x) * 3 + c];
  }

  bool operator==(const ResidualImage&) const = default;
};

// x - x', elementwise.
ResidualImage residual(const ImageU8& x, const ImageU8& x_prime);

// clamp(x' + r, 0, 255)
ImageU8 add_residual(const ImageU8& x_prime, const ResidualImage& r);

// Reflect-pad (edge mirrored without repeating the border pixel when
// possible) so both dims become multiples of `multiple`.
ImageU8 reflect_pad_to_multiple(const ImageU8& img, int multiple);
ImageU8 crop(const ImageU8& img, int w, int h);

// Quarter-turn rotations; `quarter_turns` counts 90-degree CCW steps.
ImageU8 rotate90(const ImageU8& img, int quarter_turns);

// Bilinear resize.
ImageU8 resize_bilinear(const ImageU8& img, int out_w, int out_h);

}  // namespace lhic
