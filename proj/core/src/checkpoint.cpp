#include "lhic/checkpoint.hpp"

#include <bit>
#include <cstring>

#include "lhic/container.hpp"
#include "lhic/image_io.hpp"

namespace lhic {

namespace {

static_assert(std::endian::native == std::endian::little,
              "checkpoint writer assumes a little-endian host");

constexpr char kModelMagic[8] = {'L', 'H', 'I', 'C', 'M', 'D', 'L', '1'};
constexpr char kOptMagic[8] = {'L', 'H', 'I', 'C', 'O', 'P', 'T', '1'};

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}
void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  put_u16(out, static_cast<std::uint16_t>(v));
  put_u16(out, static_cast<std::uint16_t>(v >> 16));
}
void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  put_u32(out, static_cast<std::uint32_t>(v));
  put_u32(out, static_cast<std::uint32_t>(v >> 32));
}
void put_f64(std::vector<std::uint8_t>& out, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, 8);
  put_u64(out, bits);
}
void put_f32_array(std::vector<std::uint8_t>& out, const std::vector<float>& v) {
  const size_t off = out.size();
  out.resize(off + v.size() * 4);
  std::memcpy(out.data() + off, v.data(), v.size() * 4);
}

struct Reader {
  const std::vector<std::uint8_t>& b;
  size_t pos = 0;
  void need(size_t n) const {
    if (pos + n > b.size())
      throw Error(ErrorKind::Format, "truncated checkpoint");
  }
  std::uint8_t u8() { need(1); return b[pos++]; }
  std::uint16_t u16() {
    need(2);
    std::uint16_t v = static_cast<std::uint16_t>(b[pos] | (b[pos + 1] << 8));
    pos += 2;
    return v;
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v;
    std::memcpy(&v, &b[pos], 4);
    pos += 4;
    return v;
  }
  std::uint64_t u64() {
    std::uint64_t lo = u32();
    return lo | (static_cast<std::uint64_t>(u32()) << 32);
  }
  double f64() {
    std::uint64_t bits = u64();
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
  }
  std::string str(size_t n) {
    need(n);
    std::string s(reinterpret_cast<const char*>(&b[pos]), n);
    pos += n;
    return s;
  }
  std::vector<float> f32_array(size_t n) {
    need(n * 4);
    std::vector<float> v(n);
    std::memcpy(v.data(), &b[pos], n * 4);
    pos += n * 4;
    return v;
  }
};

void put_named_tensors(std::vector<std::uint8_t>& out,
                       const std::map<std::string, nn::Tensor<float>>& tensors) {
  put_u32(out, static_cast<std::uint32_t>(tensors.size()));
  for (const auto& [name, t] : tensors) {
    put_u16(out, static_cast<std::uint16_t>(name.size()));
    out.insert(out.end(), name.begin(), name.end());
    out.push_back(static_cast<std::uint8_t>(t.shape.size()));
    for (int d : t.shape) put_u32(out, static_cast<std::uint32_t>(d));
    put_f32_array(out, t.data);
  }
}

std::map<std::string, nn::Tensor<float>> read_named_tensors(Reader& r) {
  std::map<std::string, nn::Tensor<float>> out;
  const std::uint32_t count = r.u32();
  for (std::uint32_t i = 0; i < count; ++i) {
    const std::string name = r.str(r.u16());
    const int rank = r.u8();
    std::vector<int> shape;
    std::int64_t numel = 1;
    for (int d = 0; d < rank; ++d) {
      const std::uint32_t dim = r.u32();
      if (dim == 0 || dim > (1u << 24))
        throw Error(ErrorKind::Format, "bad tensor dim in checkpoint");
      shape.push_back(static_cast<int>(dim));
      numel *= dim;
    }
    nn::Tensor<float> t;
    t.shape = std::move(shape);
    t.data = r.f32_array(static_cast<size_t>(numel));
    out.emplace(name, std::move(t));
  }
  return out;
}

}  // namespace

std::vector<std::uint8_t> serialize_model(const nn::Autoencoder<float>& model) {
  const nn::ModelConfig& cfg = model.config();
  std::vector<std::uint8_t> out(kModelMagic, kModelMagic + 8);
  out.push_back(static_cast<std::uint8_t>(cfg.compact_scale));
  out.push_back(static_cast<std::uint8_t>(cfg.activation));
  put_f64(out, cfg.dropout_p);
  out.push_back(static_cast<std::uint8_t>(cfg.stages()));
  for (int c : cfg.stage_channels) put_u16(out, static_cast<std::uint16_t>(c));
  put_named_tensors(out, model.params());
  return out;
}

nn::Autoencoder<float> deserialize_model(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 8 || std::memcmp(bytes.data(), kModelMagic, 8) != 0)
    throw Error(ErrorKind::Format, "not a LHICMDL1 model checkpoint");
  Reader r{bytes, 8};
  nn::ModelConfig cfg;
  cfg.compact_scale = r.u8();
  cfg.activation = static_cast<nn::Activation>(r.u8());
  cfg.dropout_p = r.f64();
  const int stages = r.u8();
  cfg.stage_channels.clear();
  for (int i = 0; i < stages; ++i) cfg.stage_channels.push_back(r.u16());
  auto params = read_named_tensors(r);
  if (r.pos != bytes.size())
    throw Error(ErrorKind::Format, "trailing bytes in model checkpoint");
  return nn::Autoencoder<float>::from_parts(std::move(cfg), std::move(params));
}

void save_model(const std::string& path, const nn::Autoencoder<float>& model) {
  write_file(path, serialize_model(model));
}

nn::Autoencoder<float> load_model(const std::string& path) {
  return deserialize_model(read_file(path));
}

std::array<std::uint8_t, 8> model_hash(const nn::Autoencoder<float>& model) {
  return fnv1a64(serialize_model(model));
}

void save_optimizer(const std::string& path, nn::Adam<float>& opt) {
  std::vector<std::uint8_t> out(kOptMagic, kOptMagic + 8);
  put_u64(out, opt.step_count());
  put_named_tensors(out, opt.first_moments());
  put_named_tensors(out, opt.second_moments());
  write_file(path, out);
}

void load_optimizer(const std::string& path, nn::Adam<float>& opt) {
  const std::vector<std::uint8_t> bytes = read_file(path);
  if (bytes.size() < 8 || std::memcmp(bytes.data(), kOptMagic, 8) != 0)
    throw Error(ErrorKind::Format, "not a LHICOPT1 optimizer checkpoint");
  Reader r{bytes, 8};
  opt.set_step_count(r.u64());
  opt.first_moments() = read_named_tensors(r);
  opt.second_moments() = read_named_tensors(r);
  if (r.pos != bytes.size())
    throw Error(ErrorKind::Format, "trailing bytes in optimizer checkpoint");
}

}  // namespace lhic
