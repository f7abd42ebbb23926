#include <benchmark/benchmark.h>

#include <random>

#include "lhic/builtin_codecs.hpp"
#include "lhic/graph.hpp"
#include "lhic/metrics.hpp"
#include "lhic/pipeline.hpp"

namespace {

using namespace lhic;
using namespace lhic::nn;

Tensor<float> random_tensor(std::vector<int> shape, std::uint64_t seed) {
  Tensor<float> t = Tensor<float>::zeros(std::move(shape));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<float> dist(-1.0f, 1.0f);
  for (float& v : t.data) v = dist(rng);
  return t;
}

ImageU8 bench_image(int w, int h) {
  ImageU8 img(w, h);
  std::mt19937_64 rng(1);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      for (int c = 0; c < 3; ++c)
        img.at(x, y, c) = static_cast<std::uint8_t>(
            128 + 100 * std::sin(0.07 * x + 0.05 * y + c) + static_cast<int>(rng() % 5));
  return img;
}

void BM_ConvForward(benchmark::State& state) {
  const int ch = static_cast<int>(state.range(0));
  Tensor<float> x = random_tensor({1, ch, 64, 64}, 2);
  Tensor<float> w = random_tensor({ch, ch, 3, 3}, 3);
  Tensor<float> b = Tensor<float>::zeros({ch});
  for (auto _ : state) {
    Graph<float> g;
    auto y = g.conv2d(g.input(x), g.input(w), g.input(b), 1);
    benchmark::DoNotOptimize(g.value(y).data.data());
  }
}
BENCHMARK(BM_ConvForward)->Arg(8)->Arg(16)->Arg(32);

void BM_TrainStepGraph(benchmark::State& state) {
  Autoencoder<float> model(ModelConfig::toy(8), 1);
  Tensor<float> x = random_tensor({4, 3, 16, 16}, 4);
  for (auto _ : state) {
    Graph<float> g;
    Autoencoder<float>::ParamIds ids;
    auto xin = g.input(x);
    auto code = model.compnet(g, xin, {true, 1}, ids);
    auto recon = model.recnet(g, g.fake_quant_u8(code), {true, 1}, ids);
    auto loss = g.mse_loss(recon, xin);
    g.backward(loss);
    benchmark::DoNotOptimize(g.value(loss).data[0]);
  }
}
BENCHMARK(BM_TrainStepGraph);

void BM_BuiltinLossless(benchmark::State& state) {
  BuiltinLossless codec;
  ImageU8 img = bench_image(256, 256);
  for (auto _ : state) {
    auto bytes = codec.encode(img);
    benchmark::DoNotOptimize(codec.decode(bytes).data.data());
  }
}
BENCHMARK(BM_BuiltinLossless);

void BM_BuiltinLossy(benchmark::State& state) {
  BuiltinLossy codec;
  ImageU8 img = bench_image(256, 256);
  const int step = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto bytes = codec.encode(img, step);
    benchmark::DoNotOptimize(codec.decode(bytes).data.data());
  }
}
BENCHMARK(BM_BuiltinLossy)->Arg(2)->Arg(16);

void BM_MsSsim(benchmark::State& state) {
  ImageU8 a = bench_image(256, 256);
  ImageU8 b = a;
  for (size_t i = 0; i < b.data.size(); i += 7) b.data[i] ^= 4;
  for (auto _ : state) benchmark::DoNotOptimize(ms_ssim(a, b));
}
BENCHMARK(BM_MsSsim);

}  // namespace

BENCHMARK_MAIN();
