#include "lhic/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "lhic/checkpoint.hpp"
#include "lhic/image_io.hpp"

namespace lhic {

namespace fs = std::filesystem;

std::vector<int> default_quality_grid(const std::string& codec) {
  if (codec == "builtin") return {2, 4, 8, 16, 32};
  if (codec == "bpg") return {30, 35, 40, 45};
  if (codec == "lossless") return {0};
  throw Error(ErrorKind::Usage, "no default quality grid for codec " + codec);
}

namespace {

std::vector<std::string> corpus_files(const std::string& dir) {
  if (!fs::is_directory(dir))
    throw Error(ErrorKind::Io, "corpus is not a directory: " + dir);
  std::vector<std::string> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    const std::string p = e.path().string();
    if (p.ends_with(".png") || p.ends_with(".ppm")) files.push_back(p);
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw Error(ErrorKind::Io, "no images in corpus " + dir);
  return files;
}

std::string stem(const std::string& path) { return fs::path(path).stem().string(); }

struct Job {
  std::string image_path;
  std::string label;        // codec column in the CSV
  std::string lossy_codec;  // actual enhancement codec
  int quality;
};

RDPoint run_job(const Job& job, const nn::Autoencoder<float>& model,
                ScalingMethod scaling, const std::string& lossless) {
  RDPoint pt;
  pt.image = stem(job.image_path);
  pt.codec = job.label;
  pt.quality = job.quality;
  try {
    const ImageU8 x = read_image(job.image_path);
    EncodeOptions opts;
    opts.scaling = scaling;
    opts.lossy_codec = job.lossy_codec;
    opts.lossy_quality = job.quality;
    opts.lossless_codec = lossless;
    const LayeredBitstream b = encode(x, model, opts);
    const ImageU8 xhat = decode(b, model);
    const QualityReport rep = evaluate(x, xhat, &b);
    pt.bpp = rep.bpp;
    pt.psnr_db = rep.psnr_db;
    pt.ms_ssim = rep.ms_ssim;
  } catch (const Error& e) {
    pt.status = std::string("error:") + e.what();
  }
  return pt;
}

// Runs jobs on a bounded pool; results keep deterministic job order.
std::vector<RDPoint> run_jobs(const std::vector<Job>& jobs,
                              const nn::Autoencoder<float>& model,
                              ScalingMethod scaling, const std::string& lossless,
                              int workers) {
  std::vector<RDPoint> rows(jobs.size());
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= jobs.size()) return;
      rows[i] = run_job(jobs[i], model, scaling, lossless);
    }
  };
  const int n = std::clamp(workers, 1, 16);
  std::vector<std::thread> pool;
  for (int i = 0; i < n; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  return rows;
}

void append_averages(std::vector<RDPoint>& rows, size_t per_image_count) {
  // One AVERAGE row per (codec, quality), averaging each metric over ok
  // rows, in first-seen order.
  std::vector<std::pair<std::string, int>> keys;
  for (size_t i = 0; i < per_image_count; ++i) {
    const auto key = std::make_pair(rows[i].codec, rows[i].quality);
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) keys.push_back(key);
  }
  for (const auto& [codec, quality] : keys) {
    RDPoint avg;
    avg.image = "AVERAGE";
    avg.codec = codec;
    avg.quality = quality;
    long n = 0;
    for (size_t i = 0; i < per_image_count; ++i) {
      const RDPoint& r = rows[i];
      if (r.codec != codec || r.quality != quality || r.status != "ok") continue;
      avg.bpp += r.bpp;
      avg.psnr_db += r.psnr_db;
      avg.ms_ssim += r.ms_ssim;
      ++n;
    }
    if (n > 0) {
      avg.bpp /= static_cast<double>(n);
      avg.psnr_db /= static_cast<double>(n);
      avg.ms_ssim /= static_cast<double>(n);
    } else {
      avg.status = "error:no-successful-rows";
    }
    rows.push_back(std::move(avg));
  }
}

}  // namespace

std::vector<RDPoint> run_bench(const BenchConfig& cfg) {
  const std::vector<std::string> files = corpus_files(cfg.corpus_dir);
  const nn::Autoencoder<float> model = load_model(cfg.model_path);
  if (cfg.lossy_codecs.empty())
    throw Error(ErrorKind::Usage, "bench needs at least one codec");
  if (!cfg.quality_grids.empty() &&
      cfg.quality_grids.size() != cfg.lossy_codecs.size())
    throw Error(ErrorKind::Usage, "quality_grids must match lossy_codecs");

  std::vector<Job> jobs;
  for (const std::string& f : files)
    for (size_t ci = 0; ci < cfg.lossy_codecs.size(); ++ci) {
      std::vector<int> grid = cfg.quality_grids.empty() || cfg.quality_grids[ci].empty()
                                  ? default_quality_grid(cfg.lossy_codecs[ci])
                                  : cfg.quality_grids[ci];
      if (grid.empty()) throw Error(ErrorKind::Usage, "empty quality grid");
      for (int q : grid)
        jobs.push_back({f, cfg.lossy_codecs[ci], cfg.lossy_codecs[ci], q});
    }

  std::vector<RDPoint> rows =
      run_jobs(jobs, model, cfg.scaling, cfg.lossless_codec, cfg.workers);
  append_averages(rows, jobs.size());
  if (!cfg.out_csv.empty()) write_rd_csv(cfg.out_csv, rows);
  return rows;
}

std::vector<RDPoint> run_ablation(const std::string& models_dir,
                                  const std::string& corpus_dir, int quality,
                                  ScalingMethod scaling, int workers) {
  const std::vector<std::string> files = corpus_files(corpus_dir);
  std::vector<RDPoint> rows;
  std::vector<RDPoint> skipped;
  for (int s : {8, 16, 32})
    for (const char* act : {"prelu", "relu"}) {
      const std::string config = "s" + std::to_string(s) + "_" + act;
      const std::string path = models_dir + "/model_" + config + ".lhicmdl";
      if (!fs::exists(path)) {
        RDPoint note;
        note.image = "AVERAGE";
        note.codec = config;
        note.quality = quality;
        note.status = "skipped:missing-model " + path;
        skipped.push_back(std::move(note));
        continue;
      }
      const nn::Autoencoder<float> model = load_model(path);
      std::vector<Job> jobs;
      for (const std::string& f : files) jobs.push_back({f, config, "builtin", quality});
      std::vector<RDPoint> sub = run_jobs(jobs, model, scaling, "builtin", workers);
      rows.insert(rows.end(), sub.begin(), sub.end());
    }
  append_averages(rows, rows.size());
  rows.insert(rows.end(), skipped.begin(), skipped.end());
  return rows;
}

std::string rd_csv_string(const std::vector<RDPoint>& rows) {
  std::ostringstream os;
  os.precision(10);
  os << "image,codec,quality,bpp,psnr_db,ms_ssim,status\n";
  for (const RDPoint& r : rows) {
    os << r.image << ',' << r.codec << ',' << r.quality << ',';
    if (r.status == "ok") {
      os << r.bpp << ',';
      if (std::isinf(r.psnr_db))
        os << "inf";
      else
        os << r.psnr_db;
      os << ',' << r.ms_ssim;
    } else {
      os << ",,";
    }
    os << ',' << r.status << '\n';
  }
  return os.str();
}

void write_rd_csv(const std::string& path, const std::vector<RDPoint>& rows) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw Error(ErrorKind::Io, "cannot write " + path);
  f << rd_csv_string(rows);
}

}  // namespace lhic
