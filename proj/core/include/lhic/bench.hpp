#pragma once

#include <string>
#include <vector>

#include "lhic/pipeline.hpp"

namespace lhic {

struct RDPoint {
  std::string image;    // corpus file stem, or "AVERAGE"
  std::string codec;    // lossy codec / ablation config name
  int quality = 0;
  double bpp = 0;
  double psnr_db = 0;
  double ms_ssim = 0;
  std::string status = "ok";  // "ok" or "error:<stage>" / "skipped:<why>"
};

struct BenchConfig {
  std::string corpus_dir;
  std::string model_path;
  std::vector<std::string> lossy_codecs = {"builtin"};
  // Per-codec quality grids; empty entry falls back to the default grid
  // (builtin: steps {2,4,8,16,32}; bpg: q {30,35,40,45}).
  std::vector<std::vector<int>> quality_grids;
  ScalingMethod scaling = ScalingMethod::Clip;
  std::string lossless_codec = "builtin";
  std::string out_csv;
  int workers = 4;
};

std::vector<int> default_quality_grid(const std::string& codec);

// Sweeps codec x quality over every corpus image; per-image rows come
// first in deterministic (file, codec, quality) order, then one AVERAGE
// row per codec x quality over the ok rows. Per-image failures become
// error rows; the run continues.
std::vector<RDPoint> run_bench(const BenchConfig& cfg);

// Compact-scale x activation ablation. Models are looked up in
// models_dir as model_s{8,16,32}_{prelu,relu}.lhicmdl; missing files
// yield skipped rows. Emits per-image rows plus one AVERAGE row per
// config at the given quality.
std::vector<RDPoint> run_ablation(const std::string& models_dir,
                                  const std::string& corpus_dir, int quality,
                                  ScalingMethod scaling, int workers = 4);

void write_rd_csv(const std::string& path, const std::vector<RDPoint>& rows);
std::string rd_csv_string(const std::vector<RDPoint>& rows);

}  // namespace lhic
