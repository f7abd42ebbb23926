#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lhic/adam.hpp"
#include "lhic/image.hpp"
#include "lhic/model.hpp"

namespace lhic {

struct TrainConfig {
  int epochs = 40;
  int batch_size = 20;
  double lr = 1e-4;
  int patch_size = 128;
  bool aug_rotation = true;
  bool aug_scaling = true;
  std::uint64_t seed = 1;
  int patches_per_image = 50;
  int max_steps = -1;             // cap total optimizer steps; -1 = no cap
  std::string log_csv;            // per-step loss log (step,epoch,loss)
  std::string checkpoint_dir;     // per-epoch model + optimizer files
  int start_epoch = 0;            // for resume

  void validate(int compact_scale) const;
};

// Scaling augmentation factors applied before the random crop.
inline constexpr double kScaleAugFactors[3] = {0.75, 1.0, 1.25};

struct PatchDataset {
  std::vector<ImageU8> patches;
  std::vector<std::string> skipped;  // sources too small for the patch size
};

// Deterministic given cfg.seed. Sources must be losslessly stored
// images (.png / .ppm). Images smaller than the patch size (after the
// chosen scale factor) are skipped with a note.
PatchDataset extract_patches(const std::string& dir, const TrainConfig& cfg);

struct TrainResult {
  std::vector<double> step_losses;
  std::vector<double> epoch_mean_losses;
  std::string last_checkpoint;
};

// Joint CompNet+RecNet training with MSE through the straight-through
// quantizer. Writes one checkpoint per epoch when checkpoint_dir is
// set; aborts on NaN loss keeping the last good checkpoint.
TrainResult train(nn::Autoencoder<float>& model, const PatchDataset& dataset,
                  const TrainConfig& cfg, nn::Adam<float>* optimizer = nullptr);

// Smoothed view of a loss curve (trailing mean over `window` entries).
std::vector<double> smooth_losses(const std::vector<double>& losses, int window);

}  // namespace lhic
