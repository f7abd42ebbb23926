#include "lhic/training.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "lhic/checkpoint.hpp"
#include "lhic/image_io.hpp"
#include "lhic/range_map.hpp"

namespace lhic {

namespace fs = std::filesystem;

void TrainConfig::validate(int compact_scale) const {
  if (epochs < 1 || batch_size < 1 || patch_size < 1 || patches_per_image < 1)
    throw Error(ErrorKind::Usage, "train config values must be positive");
  if (lr < 0) throw Error(ErrorKind::Usage, "learning rate must be >= 0");
  if (patch_size % compact_scale != 0)
    throw Error(ErrorKind::Usage, "patch_size must be divisible by compact_scale");
}

namespace {

std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  std::uint64_t h = a ^ (b + 0x9e3779b97f4a7c15ull + (a << 6) + (a >> 2));
  h ^= h >> 33;
  h *= 0xff51afd7ed558ccdull;
  h ^= h >> 33;
  return h;
}

}  // namespace

PatchDataset extract_patches(const std::string& dir, const TrainConfig& cfg) {
  if (!fs::is_directory(dir))
    throw Error(ErrorKind::Io, "patch source is not a directory: " + dir);
  std::vector<std::string> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    const std::string p = e.path().string();
    if (p.ends_with(".png") || p.ends_with(".ppm")) files.push_back(p);
  }
  std::sort(files.begin(), files.end());
  if (files.empty())
    throw Error(ErrorKind::Io, "no .png/.ppm images in " + dir);

  PatchDataset ds;
  std::mt19937_64 rng(mix(cfg.seed, 0xda7a5e7));
  for (const std::string& path : files) {
    const ImageU8 src = read_image(path);
    const bool aug = cfg.aug_rotation || cfg.aug_scaling;
    // Without augmentation the number of distinct crops bounds the
    // patch count, so a patch-sized image yields exactly one patch.
    long positions = static_cast<long>(std::max(0, src.width - cfg.patch_size + 1)) *
                     std::max(0, src.height - cfg.patch_size + 1);
    int want = cfg.patches_per_image;
    if (!aug) want = static_cast<int>(std::min<long>(want, positions));
    if (positions == 0 && !cfg.aug_scaling) {
      ds.skipped.push_back(path);
      continue;
    }
    int produced = 0;
    for (int i = 0; i < want; ++i) {
      ImageU8 img = src;
      if (cfg.aug_scaling) {
        const double f = kScaleAugFactors[rng() % 3];
        const int nw = std::max(cfg.patch_size,
                                static_cast<int>(std::lround(img.width * f)));
        const int nh = std::max(cfg.patch_size,
                                static_cast<int>(std::lround(img.height * f)));
        if (nw != img.width || nh != img.height) img = resize_bilinear(img, nw, nh);
      }
      if (img.width < cfg.patch_size || img.height < cfg.patch_size) break;
      const int x0 = static_cast<int>(rng() % static_cast<std::uint64_t>(
                                                  img.width - cfg.patch_size + 1));
      const int y0 = static_cast<int>(rng() % static_cast<std::uint64_t>(
                                                  img.height - cfg.patch_size + 1));
      ImageU8 patch(cfg.patch_size, cfg.patch_size);
      for (int y = 0; y < cfg.patch_size; ++y)
        for (int x = 0; x < cfg.patch_size; ++x)
          for (int c = 0; c < 3; ++c)
            patch.at(x, y, c) = img.at(x0 + x, y0 + y, c);
      if (cfg.aug_rotation) patch = rotate90(patch, static_cast<int>(rng() % 4));
      ds.patches.push_back(std::move(patch));
      ++produced;
    }
    if (produced == 0) ds.skipped.push_back(path);
  }
  if (ds.patches.empty())
    throw Error(ErrorKind::Usage, "no patches extracted; images smaller than patch size?");
  return ds;
}

namespace {

using Graphf = nn::Graph<float>;
using Model = nn::Autoencoder<float>;

// One optimizer step over a batch; returns the loss.
double train_step(Model& model, const std::vector<const ImageU8*>& batch,
                  nn::Adam<float>& opt, std::uint64_t dropout_seed) {
  const int n = static_cast<int>(batch.size());
  const int p = batch[0]->width;
  nn::Tensor<float> x = nn::Tensor<float>::zeros({n, 3, p, p});
  for (int i = 0; i < n; ++i) {
    const nn::Tensor<float> one = normalize_u8(*batch[i]);
    std::copy(one.data.begin(), one.data.end(),
              x.data.begin() + static_cast<std::ptrdiff_t>(i) * 3 * p * p);
  }
  Graphf g;
  Model::ParamIds ids;
  Model::ForwardOptions fwd{true, dropout_seed};
  Graphf::ValueId xin = g.input(std::move(x));
  Graphf::ValueId code = model.compnet(g, xin, fwd, ids);
  Graphf::ValueId quant = g.fake_quant_u8(code);
  Graphf::ValueId recon = model.recnet(g, quant, fwd, ids);
  Graphf::ValueId loss = g.mse_loss(recon, xin);
  const double loss_val = g.value(loss).data[0];
  g.backward(loss);
  std::map<std::string, nn::Tensor<float>> grads;
  for (const auto& [name, id] : ids) grads.emplace(name, g.gradient(id));
  opt.step(model.params(), grads);
  return loss_val;
}

}  // namespace

TrainResult train(Model& model, const PatchDataset& dataset,
                  const TrainConfig& cfg, nn::Adam<float>* optimizer) {
  cfg.validate(model.config().compact_scale);
  nn::Adam<float> local_opt(cfg.lr);
  nn::Adam<float>& opt = optimizer ? *optimizer : local_opt;

  std::ofstream log;
  if (!cfg.log_csv.empty()) {
    log.open(cfg.log_csv, std::ios::trunc);
    if (!log) throw Error(ErrorKind::Io, "cannot write " + cfg.log_csv);
    log << "step,epoch,loss\n";
  }
  if (!cfg.checkpoint_dir.empty()) fs::create_directories(cfg.checkpoint_dir);

  TrainResult res;
  const int npatch = static_cast<int>(dataset.patches.size());
  // Resumed runs continue the step counter so per-step seeds replay.
  const long steps_per_epoch = (npatch + cfg.batch_size - 1) / cfg.batch_size;
  long global_step = static_cast<long>(cfg.start_epoch) * steps_per_epoch;
  bool stop = false;
  for (int epoch = cfg.start_epoch; epoch < cfg.epochs && !stop; ++epoch) {
    std::vector<int> order(static_cast<size_t>(npatch));
    for (int i = 0; i < npatch; ++i) order[static_cast<size_t>(i)] = i;
    std::mt19937_64 shuffle_rng(mix(cfg.seed, static_cast<std::uint64_t>(epoch) + 1));
    std::shuffle(order.begin(), order.end(), shuffle_rng);

    double epoch_acc = 0;
    long epoch_steps = 0;
    for (int start = 0; start + 1 <= npatch && !stop; start += cfg.batch_size) {
      const int end = std::min(npatch, start + cfg.batch_size);
      std::vector<const ImageU8*> batch;
      for (int i = start; i < end; ++i)
        batch.push_back(&dataset.patches[static_cast<size_t>(order[static_cast<size_t>(i)])]);
      const std::uint64_t drop_seed =
          mix(cfg.seed, mix(static_cast<std::uint64_t>(epoch) + 7,
                            static_cast<std::uint64_t>(global_step) + 13));
      const double loss = train_step(model, batch, opt, drop_seed);
      if (std::isnan(loss)) {
        if (log) log.flush();
        throw Error(ErrorKind::Numeric,
                    "NaN loss at step " + std::to_string(global_step) +
                        "; last good checkpoint: " +
                        (res.last_checkpoint.empty() ? "<none>" : res.last_checkpoint));
      }
      res.step_losses.push_back(loss);
      epoch_acc += loss;
      ++epoch_steps;
      if (log) log << global_step << ',' << epoch << ',' << loss << '\n';
      ++global_step;
      if (cfg.max_steps >= 0 && global_step >= cfg.max_steps) stop = true;
    }
    if (epoch_steps > 0)
      res.epoch_mean_losses.push_back(epoch_acc / static_cast<double>(epoch_steps));
    if (!cfg.checkpoint_dir.empty()) {
      const std::string base =
          cfg.checkpoint_dir + "/model_epoch" + std::to_string(epoch);
      save_model(base + ".lhicmdl", model);
      save_optimizer(base + ".lhicopt", opt);
      res.last_checkpoint = base + ".lhicmdl";
    }
  }
  return res;
}

std::vector<double> smooth_losses(const std::vector<double>& losses, int window) {
  std::vector<double> out(losses.size());
  double acc = 0;
  for (size_t i = 0; i < losses.size(); ++i) {
    acc += losses[i];
    if (i >= static_cast<size_t>(window)) acc -= losses[i - static_cast<size_t>(window)];
    const size_t n = std::min(i + 1, static_cast<size_t>(window));
    out[i] = acc / static_cast<double>(n);
  }
  return out;
}

}  // namespace lhic
