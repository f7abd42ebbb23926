#include "lhic/image.hpp"

#include <algorithm>
#include <cmath>

#include "lhic/rounding.hpp"

namespace lhic {

ResidualImage residual(const ImageU8& x, const ImageU8& x_prime) {
  if (x.width != x_prime.width || x.height != x_prime.height)
    throw Error(ErrorKind::Shape, "residual: image dims differ");
  ResidualImage r(x.width, x.height);
  for (size_t i = 0; i < r.data.size(); ++i)
    r.data[i] = static_cast<std::int16_t>(static_cast<int>(x.data[i]) -
                                          static_cast<int>(x_prime.data[i]));
  return r;
}

ImageU8 add_residual(const ImageU8& x_prime, const ResidualImage& r) {
  if (x_prime.width != r.width || x_prime.height != r.height)
    throw Error(ErrorKind::Shape, "add_residual: dims differ");
  ImageU8 out(x_prime.width, x_prime.height);
  for (size_t i = 0; i < out.data.size(); ++i)
    out.data[i] = clamp_u8(static_cast<long>(x_prime.data[i]) + r.data[i]);
  return out;
}

namespace {
// Mirror index into [0, n); reflects without repeating the border pixel
// when n > 1.
int mirror(int i, int n) {
  if (n == 1) return 0;
  const int period = 2 * (n - 1);
  i = ((i % period) + period) % period;
  return i < n ? i : period - i;
}
}  // namespace

ImageU8 reflect_pad_to_multiple(const ImageU8& img, int multiple) {
  if (multiple < 1) throw Error(ErrorKind::Usage, "pad multiple must be >= 1");
  const int w = (img.width + multiple - 1) / multiple * multiple;
  const int h = (img.height + multiple - 1) / multiple * multiple;
  if (w == img.width && h == img.height) return img;
  ImageU8 out(w, h);
  for (int y = 0; y < h; ++y) {
    const int sy = mirror(y, img.height);
    for (int x = 0; x < w; ++x) {
      const int sx = mirror(x, img.width);
      for (int c = 0; c < 3; ++c) out.at(x, y, c) = img.at(sx, sy, c);
    }
  }
  return out;
}

ImageU8 crop(const ImageU8& img, int w, int h) {
  if (w > img.width || h > img.height)
    throw Error(ErrorKind::Shape, "crop larger than image");
  if (w == img.width && h == img.height) return img;
  ImageU8 out(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      for (int c = 0; c < 3; ++c) out.at(x, y, c) = img.at(x, y, c);
  return out;
}

ImageU8 rotate90(const ImageU8& img, int quarter_turns) {
  const int k = ((quarter_turns % 4) + 4) % 4;
  if (k == 0) return img;
  const bool swap = (k % 2) == 1;
  ImageU8 out(swap ? img.height : img.width, swap ? img.width : img.height);
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x) {
      int nx = 0, ny = 0;
      switch (k) {
        case 1: nx = y; ny = img.width - 1 - x; break;              // 90 CCW
        case 2: nx = img.width - 1 - x; ny = img.height - 1 - y; break;
        case 3: nx = img.height - 1 - y; ny = x; break;             // 270 CCW
      }
      for (int c = 0; c < 3; ++c) out.at(nx, ny, c) = img.at(x, y, c);
    }
  return out;
}

ImageU8 resize_bilinear(const ImageU8& img, int out_w, int out_h) {
  if (out_w < 1 || out_h < 1)
    throw Error(ErrorKind::Usage, "resize dims must be >= 1");
  ImageU8 out(out_w, out_h);
  const double sx = static_cast<double>(img.width) / out_w;
  const double sy = static_cast<double>(img.height) / out_h;
  for (int y = 0; y < out_h; ++y) {
    const double fy = (y + 0.5) * sy - 0.5;
    const int y0 = std::clamp(static_cast<int>(std::floor(fy)), 0, img.height - 1);
    const int y1 = std::min(y0 + 1, img.height - 1);
    const double wy = std::clamp(fy - y0, 0.0, 1.0);
    for (int x = 0; x < out_w; ++x) {
      const double fx = (x + 0.5) * sx - 0.5;
      const int x0 = std::clamp(static_cast<int>(std::floor(fx)), 0, img.width - 1);
      const int x1 = std::min(x0 + 1, img.width - 1);
      const double wx = std::clamp(fx - x0, 0.0, 1.0);
      for (int c = 0; c < 3; ++c) {
        const double top = img.at(x0, y0, c) * (1 - wx) + img.at(x1, y0, c) * wx;
        const double bot = img.at(x0, y1, c) * (1 - wx) + img.at(x1, y1, c) * wx;
        out.at(x, y, c) = clamp_u8(round_half_away(top * (1 - wy) + bot * wy));
      }
    }
  }
  return out;
}

}  // namespace lhic
