#include "lhic/image_io.hpp"

#include <zlib.h>

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>

namespace lhic {

std::vector<std::uint8_t> read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::Io, "cannot open " + path);
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(f),
                                   std::istreambuf_iterator<char>());
}

void write_file(const std::string& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorKind::Io, "cannot write " + path);
  f.write(reinterpret_cast<const char*>(bytes.data()),
          static_cast<std::streamsize>(bytes.size()));
  if (!f) throw Error(ErrorKind::Io, "short write to " + path);
}

namespace {

constexpr std::uint8_t kPngSig[8] = {137, 80, 78, 71, 13, 10, 26, 10};

void put_u32be(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

std::uint32_t get_u32be(const std::uint8_t* p) {
  return (std::uint32_t(p[0]) << 24) | (std::uint32_t(p[1]) << 16) |
         (std::uint32_t(p[2]) << 8) | std::uint32_t(p[3]);
}

void append_chunk(std::vector<std::uint8_t>& out, const char type[4],
                  const std::uint8_t* data, size_t len) {
  put_u32be(out, static_cast<std::uint32_t>(len));
  const size_t crc_start = out.size();
  out.insert(out.end(), type, type + 4);
  out.insert(out.end(), data, data + len);
  const uLong crc = crc32(0, out.data() + crc_start, static_cast<uInt>(len + 4));
  put_u32be(out, static_cast<std::uint32_t>(crc));
}

std::vector<std::uint8_t> zlib_deflate(const std::uint8_t* data, size_t len) {
  uLongf bound = compressBound(static_cast<uLong>(len));
  std::vector<std::uint8_t> out(bound);
  if (compress2(out.data(), &bound, data, static_cast<uLong>(len), 6) != Z_OK)
    throw Error(ErrorKind::Codec, "zlib deflate failed");
  out.resize(bound);
  return out;
}

std::vector<std::uint8_t> zlib_inflate(const std::uint8_t* data, size_t len,
                                       size_t expected) {
  std::vector<std::uint8_t> out(expected);
  uLongf out_len = static_cast<uLongf>(expected);
  const int rc = uncompress(out.data(), &out_len, data, static_cast<uLong>(len));
  if (rc != Z_OK || out_len != expected)
    throw Error(ErrorKind::Format, "zlib inflate failed or size mismatch");
  return out;
}

int paeth(int a, int b, int c) {
  const int p = a + b - c;
  const int pa = std::abs(p - a), pb = std::abs(p - b), pc = std::abs(p - c);
  if (pa <= pb && pa <= pc) return a;
  if (pb <= pc) return b;
  return c;
}

}  // namespace

std::vector<std::uint8_t> encode_png(const ImageU8& img) {
  std::vector<std::uint8_t> out(kPngSig, kPngSig + 8);
  std::uint8_t ihdr[13];
  ihdr[0] = static_cast<std::uint8_t>(img.width >> 24);
  ihdr[1] = static_cast<std::uint8_t>(img.width >> 16);
  ihdr[2] = static_cast<std::uint8_t>(img.width >> 8);
  ihdr[3] = static_cast<std::uint8_t>(img.width);
  ihdr[4] = static_cast<std::uint8_t>(img.height >> 24);
  ihdr[5] = static_cast<std::uint8_t>(img.height >> 16);
  ihdr[6] = static_cast<std::uint8_t>(img.height >> 8);
  ihdr[7] = static_cast<std::uint8_t>(img.height);
  ihdr[8] = 8;   // bit depth
  ihdr[9] = 2;   // color type: truecolor
  ihdr[10] = ihdr[11] = ihdr[12] = 0;
  append_chunk(out, "IHDR", ihdr, 13);

  const size_t stride = static_cast<size_t>(img.width) * 3;
  std::vector<std::uint8_t> raw;
  raw.reserve((stride + 1) * static_cast<size_t>(img.height));
  for (int y = 0; y < img.height; ++y) {
    raw.push_back(2);  // filter: Up
    for (size_t i = 0; i < stride; ++i) {
      const std::uint8_t cur = img.data[static_cast<size_t>(y) * stride + i];
      const std::uint8_t up =
          y > 0 ? img.data[static_cast<size_t>(y - 1) * stride + i] : 0;
      raw.push_back(static_cast<std::uint8_t>(cur - up));
    }
  }
  const std::vector<std::uint8_t> idat = zlib_deflate(raw.data(), raw.size());
  append_chunk(out, "IDAT", idat.data(), idat.size());
  append_chunk(out, "IEND", nullptr, 0);
  return out;
}

ImageU8 decode_png(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 8 || std::memcmp(bytes.data(), kPngSig, 8) != 0)
    throw Error(ErrorKind::Format, "not a PNG file");
  size_t pos = 8;
  int w = 0, h = 0, color = -1, depth = 0;
  std::vector<std::uint8_t> idat;
  while (pos + 8 <= bytes.size()) {
    const std::uint32_t len = get_u32be(&bytes[pos]);
    if (pos + 12 + len > bytes.size())
      throw Error(ErrorKind::Format, "truncated PNG chunk");
    const char* type = reinterpret_cast<const char*>(&bytes[pos + 4]);
    const std::uint8_t* data = &bytes[pos + 8];
    if (std::memcmp(type, "IHDR", 4) == 0) {
      if (len != 13) throw Error(ErrorKind::Format, "bad IHDR");
      w = static_cast<int>(get_u32be(data));
      h = static_cast<int>(get_u32be(data + 4));
      depth = data[8];
      color = data[9];
      if (depth != 8) throw Error(ErrorKind::Format, "only 8-bit PNG supported");
      if (color != 0 && color != 2 && color != 6)
        throw Error(ErrorKind::Format, "unsupported PNG color type");
      if (data[12] != 0)
        throw Error(ErrorKind::Format, "interlaced PNG not supported");
    } else if (std::memcmp(type, "IDAT", 4) == 0) {
      idat.insert(idat.end(), data, data + len);
    } else if (std::memcmp(type, "IEND", 4) == 0) {
      break;
    }
    pos += 12 + len;
  }
  if (w < 1 || h < 1 || idat.empty())
    throw Error(ErrorKind::Format, "PNG missing IHDR or IDAT");
  const int channels = color == 0 ? 1 : (color == 2 ? 3 : 4);
  const size_t stride = static_cast<size_t>(w) * channels;
  std::vector<std::uint8_t> raw =
      zlib_inflate(idat.data(), idat.size(), (stride + 1) * static_cast<size_t>(h));

  // Undo per-row filters in place.
  std::vector<std::uint8_t> pix(stride * static_cast<size_t>(h));
  for (int y = 0; y < h; ++y) {
    const std::uint8_t filter = raw[(stride + 1) * static_cast<size_t>(y)];
    const std::uint8_t* src = &raw[(stride + 1) * static_cast<size_t>(y) + 1];
    std::uint8_t* dst = &pix[stride * static_cast<size_t>(y)];
    const std::uint8_t* prev = y > 0 ? &pix[stride * static_cast<size_t>(y - 1)] : nullptr;
    for (size_t i = 0; i < stride; ++i) {
      const int a = i >= static_cast<size_t>(channels) ? dst[i - channels] : 0;
      const int b = prev ? prev[i] : 0;
      const int c = (prev && i >= static_cast<size_t>(channels)) ? prev[i - channels] : 0;
      int v = src[i];
      switch (filter) {
        case 0: break;
        case 1: v += a; break;
        case 2: v += b; break;
        case 3: v += (a + b) / 2; break;
        case 4: v += paeth(a, b, c); break;
        default: throw Error(ErrorKind::Format, "bad PNG filter type");
      }
      dst[i] = static_cast<std::uint8_t>(v);
    }
  }

  ImageU8 img(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const std::uint8_t* p = &pix[stride * static_cast<size_t>(y) +
                                   static_cast<size_t>(x) * channels];
      for (int ch = 0; ch < 3; ++ch)
        img.at(x, y, ch) = channels == 1 ? p[0] : p[ch];
    }
  return img;
}

ImageU8 read_png(const std::string& path) { return decode_png(read_file(path)); }

void write_png(const std::string& path, const ImageU8& img) {
  write_file(path, encode_png(img));
}

ImageU8 read_ppm(const std::string& path) {
  std::vector<std::uint8_t> bytes = read_file(path);
  size_t pos = 0;
  auto token = [&]() -> std::string {
    while (pos < bytes.size()) {
      if (std::isspace(bytes[pos])) { ++pos; continue; }
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
        continue;
      }
      break;
    }
    std::string t;
    while (pos < bytes.size() && !std::isspace(bytes[pos]))
      t.push_back(static_cast<char>(bytes[pos++]));
    return t;
  };
  if (token() != "P6") throw Error(ErrorKind::Format, "not a P6 PPM: " + path);
  const int w = std::stoi(token());
  const int h = std::stoi(token());
  const int maxval = std::stoi(token());
  if (maxval != 255) throw Error(ErrorKind::Format, "PPM maxval must be 255");
  ++pos;  // single whitespace after maxval
  const size_t need = static_cast<size_t>(w) * h * 3;
  if (bytes.size() - pos < need) throw Error(ErrorKind::Format, "truncated PPM");
  ImageU8 img(w, h);
  std::memcpy(img.data.data(), bytes.data() + pos, need);
  return img;
}

void write_ppm(const std::string& path, const ImageU8& img) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorKind::Io, "cannot write " + path);
  f << "P6\n" << img.width << ' ' << img.height << "\n255\n";
  f.write(reinterpret_cast<const char*>(img.data.data()),
          static_cast<std::streamsize>(img.data.size()));
  if (!f) throw Error(ErrorKind::Io, "short write to " + path);
}

namespace {
bool ends_with(const std::string& s, const std::string& suf) {
  return s.size() >= suf.size() &&
         s.compare(s.size() - suf.size(), suf.size(), suf) == 0;
}
}  // namespace

ImageU8 read_image(const std::string& path) {
  if (ends_with(path, ".png")) return read_png(path);
  if (ends_with(path, ".ppm")) return read_ppm(path);
  throw Error(ErrorKind::Usage, "unsupported image extension: " + path);
}

void write_image(const std::string& path, const ImageU8& img) {
  if (ends_with(path, ".png")) return write_png(path, img);
  if (ends_with(path, ".ppm")) return write_ppm(path, img);
  throw Error(ErrorKind::Usage, "unsupported image extension: " + path);
}

}  // namespace lhic
