#include "lhic/external_codecs.hpp"

#include <cstdlib>

#include "lhic/image_io.hpp"
#include "lhic/subprocess.hpp"

namespace lhic {

namespace {
std::string env_or(const char* var, const char* fallback) {
  const char* v = getenv(var);
  return v && *v ? v : fallback;
}

[[noreturn]] void tool_failed(const std::string& what, const SubprocessResult& r) {
  std::string msg = what;
  if (r.timed_out)
    msg += ": timed out";
  else
    msg += ": exit code " + std::to_string(r.exit_code);
  if (!r.output.empty()) msg += "; output: " + r.output;
  throw Error(ErrorKind::Codec, msg);
}
}  // namespace

ExternalToolConfig ExternalToolConfig::from_env() {
  ExternalToolConfig cfg;
  cfg.flif_path = env_or("LHIC_FLIF_PATH", "flif");
  cfg.bpgenc_path = env_or("LHIC_BPGENC_PATH", "bpgenc");
  cfg.bpgdec_path = env_or("LHIC_BPGDEC_PATH", "bpgdec");
  return cfg;
}

bool tool_available(const std::string& path) {
  try {
    // All three tools print usage and exit when run with -h or no args.
    SubprocessResult r = run_subprocess({path, "-h"}, 10000);
    return r.exit_code != 127 && !r.timed_out;
  } catch (const Error&) {
    return false;
  }
}

FlifCodec::FlifCodec(ExternalToolConfig cfg) : cfg_(std::move(cfg)) {
  if (!tool_available(cfg_.flif_path))
    throw Error(ErrorKind::Codec,
                "flif binary not found at '" + cfg_.flif_path +
                    "'; set LHIC_FLIF_PATH");
}

std::vector<std::uint8_t> FlifCodec::encode(const ImageU8& img) const {
  TempDir tmp;
  const std::string in = tmp.file("in.png");
  const std::string out = tmp.file("out.flif");
  write_png(in, img);
  SubprocessResult r =
      run_subprocess({cfg_.flif_path, "-e", "--overwrite", in, out}, cfg_.timeout_ms);
  if (r.exit_code != 0) tool_failed("flif encode", r);
  return read_file(out);
}

ImageU8 FlifCodec::decode(const std::vector<std::uint8_t>& bytes) const {
  TempDir tmp;
  const std::string in = tmp.file("in.flif");
  const std::string out = tmp.file("out.png");
  write_file(in, bytes);
  SubprocessResult r =
      run_subprocess({cfg_.flif_path, "-d", "--overwrite", in, out}, cfg_.timeout_ms);
  if (r.exit_code != 0) tool_failed("flif decode", r);
  return read_png(out);
}

BpgCodec::BpgCodec(ExternalToolConfig cfg) : cfg_(std::move(cfg)) {
  if (!tool_available(cfg_.bpgenc_path))
    throw Error(ErrorKind::Codec,
                "bpgenc binary not found at '" + cfg_.bpgenc_path +
                    "'; set LHIC_BPGENC_PATH");
  if (!tool_available(cfg_.bpgdec_path))
    throw Error(ErrorKind::Codec,
                "bpgdec binary not found at '" + cfg_.bpgdec_path +
                    "'; set LHIC_BPGDEC_PATH");
}

std::vector<std::uint8_t> BpgCodec::encode(const ImageU8& img, int quality) const {
  if (quality < quality_min() || quality > quality_max())
    throw Error(ErrorKind::Usage, "bpg quality must be in [0,51]");
  TempDir tmp;
  const std::string in = tmp.file("in.png");
  const std::string out = tmp.file("out.bpg");
  write_png(in, img);
  SubprocessResult r = run_subprocess(
      {cfg_.bpgenc_path, "-f", "444", "-c", "rgb", "-q", std::to_string(quality),
       "-o", out, in},
      cfg_.timeout_ms);
  if (r.exit_code != 0) tool_failed("bpgenc", r);
  return read_file(out);
}

ImageU8 BpgCodec::decode(const std::vector<std::uint8_t>& bytes) const {
  TempDir tmp;
  const std::string in = tmp.file("in.bpg");
  const std::string out = tmp.file("out.png");
  write_file(in, bytes);
  SubprocessResult r =
      run_subprocess({cfg_.bpgdec_path, "-o", out, in}, cfg_.timeout_ms);
  if (r.exit_code != 0) tool_failed("bpgdec", r);
  return read_png(out);
}

}  // namespace lhic
