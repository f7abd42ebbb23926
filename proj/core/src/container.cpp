#include "lhic/container.hpp"

#include <cstring>
#include <limits>

namespace lhic {

namespace {

void put_u16le(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32le(std::vector<std::uint8_t>& out, std::uint32_t v) {
  put_u16le(out, static_cast<std::uint16_t>(v));
  put_u16le(out, static_cast<std::uint16_t>(v >> 16));
}

struct Reader {
  const std::vector<std::uint8_t>& b;
  size_t pos = 0;

  void need(size_t n, const char* what) const {
    if (pos + n > b.size())
      throw Error(ErrorKind::Format,
                  std::string("truncated stream while reading ") + what);
  }
  std::uint8_t u8(const char* what) {
    need(1, what);
    return b[pos++];
  }
  std::uint16_t u16(const char* what) {
    need(2, what);
    std::uint16_t v = static_cast<std::uint16_t>(b[pos] | (b[pos + 1] << 8));
    pos += 2;
    return v;
  }
  std::uint32_t u32(const char* what) {
    need(4, what);
    std::uint32_t v = std::uint32_t(b[pos]) | (std::uint32_t(b[pos + 1]) << 8) |
                      (std::uint32_t(b[pos + 2]) << 16) |
                      (std::uint32_t(b[pos + 3]) << 24);
    pos += 4;
    return v;
  }
};

}  // namespace

std::vector<std::uint8_t> serialize(const LayeredBitstream& b) {
  if (b.width == 0 || b.height == 0)
    throw Error(ErrorKind::Usage, "container dims must be nonzero");
  std::vector<std::uint8_t> out;
  out.reserve(kContainerHeaderSize + 8 + b.base_layer.size() + b.enh_layer.size());
  out.insert(out.end(), {'L', 'H', 'I', 'C'});
  out.push_back(b.version);
  put_u32le(out, b.width);
  put_u32le(out, b.height);
  out.push_back(b.compact_scale);
  out.push_back(static_cast<std::uint8_t>(b.scaling.method));
  put_u16le(out, static_cast<std::uint16_t>(b.scaling.r_min));
  put_u16le(out, static_cast<std::uint16_t>(b.scaling.r_max));
  out.push_back(b.lossless_codec_id);
  out.push_back(b.lossy_codec_id);
  out.insert(out.end(), b.model_hash.begin(), b.model_hash.end());
  put_u32le(out, static_cast<std::uint32_t>(b.base_layer.size()));
  out.insert(out.end(), b.base_layer.begin(), b.base_layer.end());
  put_u32le(out, static_cast<std::uint32_t>(b.enh_layer.size()));
  out.insert(out.end(), b.enh_layer.begin(), b.enh_layer.end());
  return out;
}

LayeredBitstream parse(const std::vector<std::uint8_t>& bytes) {
  Reader r{bytes};
  r.need(4, "magic");
  if (std::memcmp(bytes.data(), "LHIC", 4) != 0)
    throw Error(ErrorKind::Format, "bad magic: not an .lhic stream");
  r.pos = 4;
  LayeredBitstream b;
  b.version = r.u8("version");
  if (b.version != kContainerVersion)
    throw Error(ErrorKind::Format,
                "unsupported container version " + std::to_string(b.version));
  b.width = r.u32("width");
  b.height = r.u32("height");
  if (b.width == 0 || b.height == 0)
    throw Error(ErrorKind::Format, "container dims must be nonzero");
  b.compact_scale = r.u8("compact_scale");
  const std::uint8_t method = r.u8("scaling method");
  if (method > 2)
    throw Error(ErrorKind::Format, "unknown scaling method id " + std::to_string(method));
  b.scaling.method = static_cast<ScalingMethod>(method);
  b.scaling.r_min = static_cast<std::int16_t>(r.u16("r_min"));
  b.scaling.r_max = static_cast<std::int16_t>(r.u16("r_max"));
  if (b.scaling.r_min > b.scaling.r_max)
    throw Error(ErrorKind::Format, "scaling params have r_min > r_max");
  b.lossless_codec_id = r.u8("lossless codec id");
  b.lossy_codec_id = r.u8("lossy codec id");
  r.need(8, "model hash");
  std::memcpy(b.model_hash.data(), bytes.data() + r.pos, 8);
  r.pos += 8;
  const std::uint32_t base_len = r.u32("base_len");
  if (base_len > bytes.size() - r.pos)
    throw Error(ErrorKind::Format, "base layer length overflows stream");
  b.base_layer.assign(bytes.begin() + static_cast<std::ptrdiff_t>(r.pos),
                      bytes.begin() + static_cast<std::ptrdiff_t>(r.pos + base_len));
  r.pos += base_len;
  const std::uint32_t enh_len = r.u32("enh_len");
  if (enh_len > bytes.size() - r.pos)
    throw Error(ErrorKind::Format, "enhancement layer length overflows stream");
  b.enh_layer.assign(bytes.begin() + static_cast<std::ptrdiff_t>(r.pos),
                     bytes.begin() + static_cast<std::ptrdiff_t>(r.pos + enh_len));
  r.pos += enh_len;
  if (r.pos != bytes.size())
    throw Error(ErrorKind::Format, "trailing bytes after enhancement layer");
  return b;
}

double bpp(const LayeredBitstream& b, int width, int height) {
  if (width <= 0 || height <= 0)
    throw Error(ErrorKind::Usage, "bpp requires positive dims");
  const double bits = 8.0 * static_cast<double>(serialize(b).size());
  return bits / (static_cast<double>(width) * height * 3.0);
}

std::array<std::uint8_t, 8> fnv1a64(const std::vector<std::uint8_t>& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (std::uint8_t c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  std::array<std::uint8_t, 8> out;
  for (int i = 0; i < 8; ++i) out[static_cast<size_t>(i)] = static_cast<std::uint8_t>(h >> (8 * i));
  return out;
}

}  // namespace lhic
