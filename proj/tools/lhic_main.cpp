// lhic: layered hybrid image codec CLI.
//
// Subcommands: train, encode, decode, eval, bench.
// Exit codes: 0 ok, 1 usage, 2 I/O, 3 codec, 4 model mismatch.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <sstream>

#include "lhic/bench.hpp"
#include "lhic/checkpoint.hpp"
#include "lhic/image_io.hpp"
#include "lhic/pipeline.hpp"
#include "lhic/training.hpp"

namespace {

using namespace lhic;

std::vector<int> parse_int_list(const std::string& csv) {
  std::vector<int> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    out.push_back(std::stoi(tok));
  }
  return out;
}

int cmd_train(const std::string& data_dir, const std::string& output,
              TrainConfig tcfg, int compact_scale, const std::string& activation,
              double dropout, const std::string& channels,
              const std::string& resume) {
  nn::ModelConfig mcfg = channels.empty()
                             ? nn::ModelConfig::defaults(compact_scale)
                             : nn::ModelConfig();
  if (!channels.empty()) {
    mcfg.compact_scale = compact_scale;
    mcfg.stage_channels = parse_int_list(channels);
  }
  mcfg.dropout_p = dropout;
  mcfg.activation = activation == "relu" ? nn::Activation::ReLU
                                         : nn::Activation::PReLU;
  mcfg.validate();
  if (tcfg.patch_size % compact_scale != 0)
    throw Error(ErrorKind::Usage, "--patch-size must be divisible by --compact-scale");

  nn::Autoencoder<float> model =
      resume.empty() ? nn::Autoencoder<float>(mcfg, tcfg.seed) : load_model(resume);
  nn::Adam<float> opt(tcfg.lr);
  if (!resume.empty()) {
    const std::string opt_path =
        resume.substr(0, resume.rfind('.')) + ".lhicopt";
    try {
      load_optimizer(opt_path, opt);
    } catch (const Error&) {
      std::cerr << "note: no optimizer sidecar at " << opt_path
                << "; starting Adam state fresh\n";
    }
  }
  const PatchDataset ds = extract_patches(data_dir, tcfg);
  for (const std::string& s : ds.skipped)
    std::cerr << "warning: skipped (smaller than patch size): " << s << "\n";
  std::cerr << "training on " << ds.patches.size() << " patches\n";
  const TrainResult res = train(model, ds, tcfg, &opt);
  save_model(output, model);
  save_optimizer(output.substr(0, output.rfind('.')) + ".lhicopt", opt);
  if (!res.step_losses.empty())
    std::cerr << "final loss " << res.step_losses.back() << " after "
              << res.step_losses.size() << " steps\n";
  std::cout << output << "\n";
  return 0;
}

int cmd_encode(const std::string& model_path, const std::string& input,
               const std::string& output, const EncodeOptions& opts, bool json) {
  const nn::Autoencoder<float> model = load_model(model_path);
  const ImageU8 x = read_image(input);
  const LayeredBitstream b = encode(x, model, opts);
  write_file(output, serialize(b));
  const double rate = bpp(b, x.width, x.height);
  if (json)
    std::cout << "{\"output\": \"" << output << "\", \"bpp\": " << rate
              << ", \"base_bytes\": " << b.base_layer.size()
              << ", \"enh_bytes\": " << b.enh_layer.size() << "}\n";
  else
    std::cout << output << ": " << rate << " bits/pixel/channel\n";
  return 0;
}

int cmd_decode(const std::string& model_path, const std::string& input,
               const std::string& output, bool force) {
  const nn::Autoencoder<float> model = load_model(model_path);
  const LayeredBitstream b = parse(read_file(input));
  write_image(output, decode(b, model, force));
  std::cout << output << "\n";
  return 0;
}

int cmd_eval(const std::string& input, const std::string& ref,
             const std::string& bitstream, bool json) {
  const ImageU8 a = read_image(ref);
  const ImageU8 b = read_image(input);
  LayeredBitstream stream;
  const LayeredBitstream* sp = nullptr;
  if (!bitstream.empty()) {
    stream = parse(read_file(bitstream));
    sp = &stream;
  }
  const QualityReport rep = evaluate(a, b, sp);
  if (json)
    std::cout << rep.to_json() << "\n";
  else
    std::cout << "psnr_db,ms_ssim,bpp\n" << rep.to_csv_row() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lhic: two-layer hybrid image codec (autoencoder base layer + "
               "residual enhancement layer)"};
  app.require_subcommand(1);

  // train
  auto* train_cmd = app.add_subcommand("train", "Train CompNet/RecNet on patches");
  std::string data_dir, train_out = "model.lhicmdl", activation = "prelu";
  std::string channels, resume, log_csv, ckpt_dir;
  TrainConfig tcfg;
  int compact_scale = 16;
  double dropout = 0.2;
  train_cmd->add_option("--data", data_dir, "Directory of lossless images")->required();
  train_cmd->add_option("--output", train_out, "Output model checkpoint");
  train_cmd->add_option("--epochs", tcfg.epochs, "Training epochs");
  train_cmd->add_option("--batch-size", tcfg.batch_size, "Mini-batch size");
  train_cmd->add_option("--lr", tcfg.lr, "Adam learning rate");
  train_cmd->add_option("--patch-size", tcfg.patch_size, "Square patch side");
  train_cmd->add_option("--patches-per-image", tcfg.patches_per_image, "Patches per source image");
  train_cmd->add_option("--max-steps", tcfg.max_steps, "Cap on optimizer steps");
  train_cmd->add_option("--seed", tcfg.seed, "RNG seed");
  train_cmd->add_option("--compact-scale", compact_scale, "Compact side ratio: 8, 16 or 32")
      ->check(CLI::IsMember({8, 16, 32}));
  train_cmd->add_option("--activation", activation, "prelu or relu")
      ->check(CLI::IsMember({"prelu", "relu"}));
  train_cmd->add_option("--dropout", dropout, "Dropout probability");
  train_cmd->add_option("--channels", channels, "Per-stage channel plan, e.g. 8,12,16");
  train_cmd->add_option("--log", tcfg.log_csv, "Per-step loss CSV");
  train_cmd->add_option("--checkpoint-dir", tcfg.checkpoint_dir, "Per-epoch checkpoints");
  train_cmd->add_flag_callback("--no-rotation", [&] { tcfg.aug_rotation = false; });
  train_cmd->add_flag_callback("--no-scaling", [&] { tcfg.aug_scaling = false; });
  train_cmd->add_option("--resume", resume, "Checkpoint to resume from");

  // encode
  auto* enc_cmd = app.add_subcommand("encode", "Encode an image to .lhic");
  std::string model_path, input, output;
  std::string scaling = "clip", codec_lossless = "builtin", codec_lossy = "builtin";
  EncodeOptions eopts;
  bool json = false;
  enc_cmd->add_option("--model", model_path, "Model checkpoint")->required();
  enc_cmd->add_option("--input", input, "Input image (.png/.ppm)")->required();
  enc_cmd->add_option("--output", output, "Output .lhic path")->required();
  enc_cmd->add_option("--quality", eopts.lossy_quality, "Enhancement codec quality");
  enc_cmd->add_option("--scaling", scaling, "Residual scaling: shift|minmax|clip")
      ->check(CLI::IsMember({"shift", "minmax", "clip"}));
  enc_cmd->add_option("--clip-bound", eopts.clip_bound, "Clip scaling bound");
  enc_cmd->add_option("--codec-lossless", codec_lossless, "builtin|flif");
  enc_cmd->add_option("--codec-lossy", codec_lossy, "builtin|bpg|lossless");
  enc_cmd->add_flag("--no-enhancement", eopts.skip_enhancement, "Coarse-only stream");
  enc_cmd->add_flag("--json", json, "Machine-readable output");

  // decode
  auto* dec_cmd = app.add_subcommand("decode", "Decode a .lhic stream");
  bool force = false;
  dec_cmd->add_option("--model", model_path, "Model checkpoint")->required();
  dec_cmd->add_option("--input", input, "Input .lhic")->required();
  dec_cmd->add_option("--output", output, "Output image (.png/.ppm)")->required();
  dec_cmd->add_flag("--force", force, "Decode despite model hash mismatch");

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "PSNR / MS-SSIM / bpp report");
  std::string ref, bitstream;
  eval_cmd->add_option("--input", input, "Reconstructed image")->required();
  eval_cmd->add_option("--ref", ref, "Reference image")->required();
  eval_cmd->add_option("--bitstream", bitstream, ".lhic stream for bpp");
  eval_cmd->add_flag("--json", json, "Machine-readable output");

  // bench
  auto* bench_cmd = app.add_subcommand("bench", "Rate-distortion sweep over a corpus");
  BenchConfig bcfg;
  std::vector<std::string> grids;
  bool ablation = false;
  std::string models_dir;
  int abl_quality = 2;
  bench_cmd->add_option("--corpus", bcfg.corpus_dir, "Corpus directory")->required();
  bench_cmd->add_option("--model", bcfg.model_path, "Model checkpoint");
  bench_cmd->add_option("--output", bcfg.out_csv, "Output CSV");
  bench_cmd->add_option("--codecs", bcfg.lossy_codecs, "Enhancement codecs to sweep");
  bench_cmd->add_option("--grids", grids,
                        "Comma-separated quality grid per codec (aligned with --codecs)");
  bench_cmd->add_option("--scaling", scaling, "shift|minmax|clip")
      ->check(CLI::IsMember({"shift", "minmax", "clip"}));
  bench_cmd->add_option("--workers", bcfg.workers, "Worker pool size");
  bench_cmd->add_flag("--ablation", ablation, "compact-scale x activation sweep");
  bench_cmd->add_option("--models-dir", models_dir, "Ablation model directory");
  bench_cmd->add_option("--quality", abl_quality, "Ablation enhancement quality");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (*train_cmd)
      return cmd_train(data_dir, train_out, tcfg, compact_scale, activation,
                       dropout, channels, resume);
    if (*enc_cmd) {
      eopts.scaling = scaling_method_from_name(scaling);
      eopts.lossless_codec = codec_lossless;
      eopts.lossy_codec = codec_lossy;
      return cmd_encode(model_path, input, output, eopts, json);
    }
    if (*dec_cmd) return cmd_decode(model_path, input, output, force);
    if (*eval_cmd) return cmd_eval(input, ref, bitstream, json);
    if (*bench_cmd) {
      if (ablation) {
        if (models_dir.empty())
          throw Error(ErrorKind::Usage, "--ablation requires --models-dir");
        const auto rows = run_ablation(models_dir, bcfg.corpus_dir, abl_quality,
                                       scaling_method_from_name(scaling),
                                       bcfg.workers);
        if (!bcfg.out_csv.empty())
          write_rd_csv(bcfg.out_csv, rows);
        else
          std::cout << rd_csv_string(rows);
        return 0;
      }
      if (bcfg.model_path.empty())
        throw Error(ErrorKind::Usage, "bench requires --model");
      bcfg.scaling = scaling_method_from_name(scaling);
      for (const std::string& g : grids) bcfg.quality_grids.push_back(parse_int_list(g));
      const auto rows = run_bench(bcfg);
      if (bcfg.out_csv.empty()) std::cout << rd_csv_string(rows);
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
