#include "lhic/builtin_codecs.hpp"

#include <zlib.h>

#include <cmath>
#include <cstdlib>
#include <cstring>

#include "lhic/rounding.hpp"

#ifndef M_PI
#define M_PI 3.14159265358979323846
#endif

namespace lhic {

namespace {

void put_u32le(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 24));
}

std::uint32_t get_u32le(const std::uint8_t* p) {
  return std::uint32_t(p[0]) | (std::uint32_t(p[1]) << 8) |
         (std::uint32_t(p[2]) << 16) | (std::uint32_t(p[3]) << 24);
}

std::vector<std::uint8_t> deflate_bytes(const std::uint8_t* data, size_t len) {
  uLongf bound = compressBound(static_cast<uLong>(len));
  std::vector<std::uint8_t> out(bound);
  if (compress2(out.data(), &bound, data, static_cast<uLong>(len), 9) != Z_OK)
    throw Error(ErrorKind::Codec, "deflate failed");
  out.resize(bound);
  return out;
}

std::vector<std::uint8_t> inflate_bytes(const std::uint8_t* data, size_t len,
                                        size_t expected) {
  std::vector<std::uint8_t> out(expected);
  uLongf out_len = static_cast<uLongf>(expected);
  if (uncompress(out.data(), &out_len, data, static_cast<uLong>(len)) != Z_OK ||
      out_len != expected)
    throw Error(ErrorKind::Codec, "inflate failed or size mismatch");
  return out;
}

int paeth(int a, int b, int c) {
  const int p = a + b - c;
  const int pa = std::abs(p - a), pb = std::abs(p - b), pc = std::abs(p - c);
  if (pa <= pb && pa <= pc) return a;
  if (pb <= pc) return b;
  return c;
}

// Orthonormal 8x8 DCT-II basis.
struct DctBasis {
  double m[8][8];
  DctBasis() {
    for (int k = 0; k < 8; ++k) {
      const double s = k == 0 ? std::sqrt(1.0 / 8.0) : std::sqrt(2.0 / 8.0);
      for (int n = 0; n < 8; ++n)
        m[k][n] = s * std::cos(M_PI * (2 * n + 1) * k / 16.0);
    }
  }
};
const DctBasis kDct;

void dct2d(const double in[8][8], double out[8][8]) {
  double tmp[8][8];
  for (int k = 0; k < 8; ++k)
    for (int x = 0; x < 8; ++x) {
      double acc = 0;
      for (int y = 0; y < 8; ++y) acc += kDct.m[k][y] * in[y][x];
      tmp[k][x] = acc;
    }
  for (int k = 0; k < 8; ++k)
    for (int l = 0; l < 8; ++l) {
      double acc = 0;
      for (int x = 0; x < 8; ++x) acc += kDct.m[l][x] * tmp[k][x];
      out[k][l] = acc;
    }
}

void idct2d(const double in[8][8], double out[8][8]) {
  double tmp[8][8];
  for (int k = 0; k < 8; ++k)
    for (int x = 0; x < 8; ++x) {
      double acc = 0;
      for (int l = 0; l < 8; ++l) acc += kDct.m[l][x] * in[k][l];
      tmp[k][x] = acc;
    }
  for (int y = 0; y < 8; ++y)
    for (int x = 0; x < 8; ++x) {
      double acc = 0;
      for (int k = 0; k < 8; ++k) acc += kDct.m[k][y] * tmp[k][x];
      out[y][x] = acc;
    }
}

constexpr int kZigzag[64] = {
    0,  1,  8,  16, 9,  2,  3,  10, 17, 24, 32, 25, 18, 11, 4,  5,
    12, 19, 26, 33, 40, 48, 41, 34, 27, 20, 13, 6,  7,  14, 21, 28,
    35, 42, 49, 56, 57, 50, 43, 36, 29, 22, 15, 23, 30, 37, 44, 51,
    58, 59, 52, 45, 38, 31, 39, 46, 53, 60, 61, 54, 47, 55, 62, 63};

}  // namespace

std::vector<std::uint8_t> BuiltinLossless::encode(const ImageU8& img) const {
  const size_t stride = static_cast<size_t>(img.width) * 3;
  std::vector<std::uint8_t> filtered(img.data.size());
  for (int y = 0; y < img.height; ++y)
    for (size_t i = 0; i < stride; ++i) {
      const size_t idx = static_cast<size_t>(y) * stride + i;
      const int a = i >= 3 ? img.data[idx - 3] : 0;
      const int b = y > 0 ? img.data[idx - stride] : 0;
      const int c = (y > 0 && i >= 3) ? img.data[idx - stride - 3] : 0;
      filtered[idx] = static_cast<std::uint8_t>(img.data[idx] - paeth(a, b, c));
    }
  std::vector<std::uint8_t> out{'L', '1'};
  put_u32le(out, static_cast<std::uint32_t>(img.width));
  put_u32le(out, static_cast<std::uint32_t>(img.height));
  const std::vector<std::uint8_t> z = deflate_bytes(filtered.data(), filtered.size());
  out.insert(out.end(), z.begin(), z.end());
  return out;
}

ImageU8 BuiltinLossless::decode(const std::vector<std::uint8_t>& bytes) const {
  if (bytes.size() < 10 || bytes[0] != 'L' || bytes[1] != '1')
    throw Error(ErrorKind::Codec, "builtin lossless: bad header");
  const int w = static_cast<int>(get_u32le(&bytes[2]));
  const int h = static_cast<int>(get_u32le(&bytes[6]));
  if (w < 1 || h < 1 || static_cast<std::int64_t>(w) * h > (1ll << 30))
    throw Error(ErrorKind::Codec, "builtin lossless: bad dims");
  const size_t stride = static_cast<size_t>(w) * 3;
  std::vector<std::uint8_t> filtered =
      inflate_bytes(bytes.data() + 10, bytes.size() - 10, stride * static_cast<size_t>(h));
  ImageU8 img(w, h);
  for (int y = 0; y < h; ++y)
    for (size_t i = 0; i < stride; ++i) {
      const size_t idx = static_cast<size_t>(y) * stride + i;
      const int a = i >= 3 ? img.data[idx - 3] : 0;
      const int b = y > 0 ? img.data[idx - stride] : 0;
      const int c = (y > 0 && i >= 3) ? img.data[idx - stride - 3] : 0;
      img.data[idx] = static_cast<std::uint8_t>(filtered[idx] + paeth(a, b, c));
    }
  return img;
}

std::vector<std::uint8_t> BuiltinLossy::encode(const ImageU8& img, int quality) const {
  if (quality < quality_min() || quality > quality_max())
    throw Error(ErrorKind::Usage,
                "builtin lossy: quality step out of range [" +
                    std::to_string(quality_min()) + "," +
                    std::to_string(quality_max()) + "]");
  const int bw = (img.width + 7) / 8, bh = (img.height + 7) / 8;
  std::vector<std::int16_t> coeffs;
  coeffs.reserve(static_cast<size_t>(bw) * bh * 3 * 64);
  for (int c = 0; c < 3; ++c)
    for (int by = 0; by < bh; ++by)
      for (int bx = 0; bx < bw; ++bx) {
        double block[8][8], f[8][8];
        for (int y = 0; y < 8; ++y)
          for (int x = 0; x < 8; ++x) {
            // edge-replicated padding
            const int sx = std::min(bx * 8 + x, img.width - 1);
            const int sy = std::min(by * 8 + y, img.height - 1);
            block[y][x] = static_cast<double>(img.at(sx, sy, c)) - 128.0;
          }
        dct2d(block, f);
        const double* flat = &f[0][0];
        for (int i = 0; i < 64; ++i) {
          const double v = flat[kZigzag[i]];
          const double step = i == 0 ? 1.0 : static_cast<double>(quality);
          coeffs.push_back(static_cast<std::int16_t>(round_half_away(v / step)));
        }
      }
  std::vector<std::uint8_t> raw(coeffs.size() * 2);
  for (size_t i = 0; i < coeffs.size(); ++i) {
    raw[2 * i] = static_cast<std::uint8_t>(static_cast<std::uint16_t>(coeffs[i]));
    raw[2 * i + 1] =
        static_cast<std::uint8_t>(static_cast<std::uint16_t>(coeffs[i]) >> 8);
  }
  std::vector<std::uint8_t> out{'D', '1'};
  put_u32le(out, static_cast<std::uint32_t>(img.width));
  put_u32le(out, static_cast<std::uint32_t>(img.height));
  put_u32le(out, static_cast<std::uint32_t>(quality));
  const std::vector<std::uint8_t> z = deflate_bytes(raw.data(), raw.size());
  out.insert(out.end(), z.begin(), z.end());
  return out;
}

ImageU8 BuiltinLossy::decode(const std::vector<std::uint8_t>& bytes) const {
  if (bytes.size() < 14 || bytes[0] != 'D' || bytes[1] != '1')
    throw Error(ErrorKind::Codec, "builtin lossy: bad header");
  const int w = static_cast<int>(get_u32le(&bytes[2]));
  const int h = static_cast<int>(get_u32le(&bytes[6]));
  const int step = static_cast<int>(get_u32le(&bytes[10]));
  if (w < 1 || h < 1 || step < 1 ||
      static_cast<std::int64_t>(w) * h > (1ll << 30))
    throw Error(ErrorKind::Codec, "builtin lossy: bad dims or step");
  const int bw = (w + 7) / 8, bh = (h + 7) / 8;
  const size_t ncoef = static_cast<size_t>(bw) * bh * 3 * 64;
  std::vector<std::uint8_t> raw =
      inflate_bytes(bytes.data() + 14, bytes.size() - 14, ncoef * 2);
  ImageU8 img(w, h);
  size_t ci = 0;
  for (int c = 0; c < 3; ++c)
    for (int by = 0; by < bh; ++by)
      for (int bx = 0; bx < bw; ++bx) {
        double f[8][8] = {};
        double* flat = &f[0][0];
        for (int i = 0; i < 64; ++i, ++ci) {
          const std::int16_t q = static_cast<std::int16_t>(
              static_cast<std::uint16_t>(raw[2 * ci]) |
              (static_cast<std::uint16_t>(raw[2 * ci + 1]) << 8));
          const double s = i == 0 ? 1.0 : static_cast<double>(step);
          flat[kZigzag[i]] = q * s;
        }
        double block[8][8];
        idct2d(f, block);
        for (int y = 0; y < 8; ++y)
          for (int x = 0; x < 8; ++x) {
            const int dx = bx * 8 + x, dy = by * 8 + y;
            if (dx >= w || dy >= h) continue;
            img.at(dx, dy, c) = clamp_u8(round_half_away(block[y][x] + 128.0));
          }
      }
  return img;
}

std::vector<std::uint8_t> LosslessAsLossy::encode(const ImageU8& img, int) const {
  return BuiltinLossless().encode(img);
}

ImageU8 LosslessAsLossy::decode(const std::vector<std::uint8_t>& bytes) const {
  return BuiltinLossless().decode(bytes);
}

}  // namespace lhic
