#include <doctest.h>

#include <random>

#include "lhic/adam.hpp"
#include "lhic/graph.hpp"
#include "test_helpers.hpp"

using namespace lhic;
using namespace lhic::nn;
using lhic::test::dot;
using lhic::test::finite_diff_max_rel_err;
using lhic::test::random_tensor;

namespace {

// Independent brute-force 3x3 convolution used as the oracle; written
// as a plain quadruple loop over output positions with explicit bounds
// checks, no shared code with conv_gather.
Tensor<double> brute_conv(const Tensor<double>& x, const Tensor<double>& w,
                          const Tensor<double>& b, int stride) {
  const int N = x.shape[0], Ci = x.shape[1], H = x.shape[2], W = x.shape[3];
  const int Co = w.shape[0];
  Tensor<double> y = Tensor<double>::zeros({N, Co, H / stride, W / stride});
  for (int n = 0; n < N; ++n)
    for (int co = 0; co < Co; ++co)
      for (int ho = 0; ho < H / stride; ++ho)
        for (int wo = 0; wo < W / stride; ++wo) {
          double acc = b.data[static_cast<size_t>(co)];
          for (int ci = 0; ci < Ci; ++ci)
            for (int dh = -1; dh <= 1; ++dh)
              for (int dw = -1; dw <= 1; ++dw) {
                const int ih = ho * stride + dh, iw = wo * stride + dw;
                if (ih < 0 || ih >= H || iw < 0 || iw >= W) continue;
                acc += x.at4(n, ci, ih, iw) * w.at4(co, ci, dh + 1, dw + 1);
              }
          y.at4(n, co, ho, wo) = acc;
        }
  return y;
}

double run_conv_loss(const std::vector<double>& wflat,
                     const Tensor<double>& x, const std::vector<int>& wshape,
                     int stride) {
  Graph<double> g;
  auto xin = g.input(x);
  Tensor<double> w = Tensor<double>::from(wshape, wflat);
  auto wid = g.param(std::move(w));
  auto bid = g.param(Tensor<double>::zeros({wshape[0]}));
  auto y = g.conv2d(xin, wid, bid, stride);
  auto loss = g.mse_loss(y, g.input(Tensor<double>::zeros(g.value(y).shape)));
  return g.value(loss).data[0];
}

}  // namespace

TEST_CASE("conv2d: zero kernel maps ones to zeros") {
  Graph<double> g;
  auto x = g.input(Tensor<double>::full({1, 1, 4, 4}, 1.0));
  auto w = g.input(Tensor<double>::zeros({1, 1, 3, 3}));
  auto b = g.input(Tensor<double>::zeros({1}));
  auto y = g.conv2d(x, w, b, 1);
  CHECK(g.value(y).shape == std::vector<int>{1, 1, 4, 4});
  for (double v : g.value(y).data) CHECK(v == 0.0);
}

TEST_CASE("conv2d: identity kernel reproduces input") {
  std::mt19937_64 rng(7);
  Tensor<double> xv = random_tensor({2, 3, 4, 6}, rng);
  Tensor<double> wv = Tensor<double>::zeros({3, 3, 3, 3});
  for (int c = 0; c < 3; ++c) wv.at4(c, c, 1, 1) = 1.0;
  Graph<double> g;
  auto y = g.conv2d(g.input(xv), g.input(wv), g.input(Tensor<double>::zeros({3})), 1);
  for (size_t i = 0; i < xv.data.size(); ++i)
    CHECK(g.value(y).data[i] == doctest::Approx(xv.data[i]).epsilon(1e-15));
}

TEST_CASE("conv2d: stride-2 all-ones kernel matches direct summation") {
  // 4x4 ones, 3x3 ones kernel, stride 2, pad 1: output taps count the
  // in-bounds neighbors. Corner tap (0,0) sees a 2x2 window of ones.
  Graph<double> g;
  auto y = g.conv2d(g.input(Tensor<double>::full({1, 1, 4, 4}, 1.0)),
                    g.input(Tensor<double>::full({1, 1, 3, 3}, 1.0)),
                    g.input(Tensor<double>::zeros({1})), 2);
  CHECK(g.value(y).shape == std::vector<int>{1, 1, 2, 2});
  CHECK(g.value(y).at4(0, 0, 0, 0) == 4.0);
  // cross-check the whole output against the brute-force oracle
  std::mt19937_64 rng(3);
  Tensor<double> xv = random_tensor({2, 3, 6, 4}, rng);
  Tensor<double> wv = random_tensor({4, 3, 3, 3}, rng);
  Tensor<double> bv = random_tensor({4}, rng);
  Graph<double> g2;
  auto y2 = g2.conv2d(g2.input(xv), g2.input(wv), g2.input(bv), 2);
  Tensor<double> want = brute_conv(xv, wv, bv, 2);
  REQUIRE(g2.value(y2).shape == want.shape);
  for (size_t i = 0; i < want.data.size(); ++i)
    CHECK(g2.value(y2).data[i] == doctest::Approx(want.data[i]).epsilon(1e-12));
}

TEST_CASE("conv2d: shape mismatch raises a structured error") {
  Graph<double> g;
  auto x = g.input(Tensor<double>::zeros({1, 2, 4, 4}));
  auto w = g.input(Tensor<double>::zeros({1, 3, 3, 3}));
  auto b = g.input(Tensor<double>::zeros({1}));
  CHECK_THROWS_WITH_AS(g.conv2d(x, w, b, 1),
                       doctest::Contains("channel mismatch"), Error);
}

TEST_CASE("deconv2d: zero input yields broadcast bias") {
  Graph<double> g;
  Tensor<double> b = Tensor<double>::from({2}, {0.5, -1.5});
  auto y = g.deconv2d(g.input(Tensor<double>::zeros({1, 3, 2, 2})),
                      g.input(Tensor<double>::zeros({3, 2, 3, 3})), g.input(b), 2);
  CHECK(g.value(y).shape == std::vector<int>{1, 2, 4, 4});
  for (int h = 0; h < 4; ++h)
    for (int w = 0; w < 4; ++w) {
      CHECK(g.value(y).at4(0, 0, h, w) == 0.5);
      CHECK(g.value(y).at4(0, 1, h, w) == -1.5);
    }
}

TEST_CASE("deconv2d: stride-2 doubles spatial dims") {
  Graph<double> g;
  auto y = g.deconv2d(g.input(Tensor<double>::zeros({1, 1, 2, 2})),
                      g.input(Tensor<double>::zeros({1, 1, 3, 3})),
                      g.input(Tensor<double>::zeros({1})), 2);
  CHECK(g.value(y).shape == std::vector<int>{1, 1, 4, 4});
}

TEST_CASE("conv/deconv adjoint identity <conv(x),y> == <x,deconv(y)>") {
  std::mt19937_64 rng(11);
  for (int stride : {1, 2}) {
    for (int rep = 0; rep < 20; ++rep) {
      const int ci = 1 + static_cast<int>(rng() % 3);
      const int co = 1 + static_cast<int>(rng() % 3);
      const int h = 2 * (1 + static_cast<int>(rng() % 3));
      const int w = 2 * (1 + static_cast<int>(rng() % 3));
      Tensor<double> x = random_tensor({1, ci, h, w}, rng);
      Tensor<double> wt = random_tensor({co, ci, 3, 3}, rng);
      Tensor<double> y = random_tensor({1, co, h / stride, w / stride}, rng);
      Graph<double> g;
      auto cx = g.conv2d(g.input(x), g.input(wt),
                         g.input(Tensor<double>::zeros({co})), stride);
      auto dy = g.deconv2d(g.input(y), g.input(wt),
                           g.input(Tensor<double>::zeros({ci})), stride);
      CHECK(dot(g.value(cx), y) ==
            doctest::Approx(dot(x, g.value(dy))).epsilon(1e-10));
    }
  }
}

TEST_CASE("prelu formula and relu degeneracy") {
  Graph<double> g;
  Tensor<double> x = Tensor<double>::from({1, 1, 1, 2}, {2.0, -2.0});
  auto y = g.prelu(g.input(x), g.input(Tensor<double>::from({1}, {0.25})));
  CHECK(g.value(y).data[0] == 2.0);
  CHECK(g.value(y).data[1] == -0.5);

  std::mt19937_64 rng(5);
  Tensor<double> xr = random_tensor({2, 3, 4, 4}, rng);
  Graph<double> g2;
  auto xin = g2.input(xr);
  auto pre = g2.prelu(xin, g2.input(Tensor<double>::zeros({3})));
  auto rel = g2.relu(xin);
  CHECK(g2.value(pre).data == g2.value(rel).data);
}

TEST_CASE("tanh and relu point values") {
  Graph<double> g;
  auto y = g.tanh_op(g.input(Tensor<double>::from({3}, {0.0, 1.0, -3.0})));
  CHECK(g.value(y).data[0] == 0.0);
  CHECK(g.value(y).data[1] == doctest::Approx(0.761594155955765).epsilon(1e-12));
  auto r = g.relu(g.input(Tensor<double>::from({1}, {-3.0})));
  CHECK(g.value(r).data[0] == 0.0);
}

TEST_CASE("dropout: p=0 and inference are identity; p>=1 rejected") {
  std::mt19937_64 rng(9);
  Tensor<double> x = random_tensor({1, 2, 4, 4}, rng);
  Graph<double> g;
  auto xin = g.input(x);
  CHECK(g.value(g.dropout(xin, 0.0, true, 1)).data == x.data);
  CHECK(g.value(g.dropout(xin, 0.9, false, 1)).data == x.data);
  CHECK_THROWS_AS(g.dropout(xin, 1.0, true, 1), Error);
}

TEST_CASE("dropout: inverted scaling preserves the mean within 5%") {
  Graph<double> g;
  auto xin = g.input(Tensor<double>::full({1, 1, 400, 250}, 1.0));  // 1e5 elems
  auto y = g.dropout(xin, 0.5, true, 12345);
  double mean = 0;
  for (double v : g.value(y).data) mean += v;
  mean /= 1e5;
  CHECK(mean == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("dropout: same seed gives the identical mask") {
  std::mt19937_64 rng(4);
  Tensor<double> x = random_tensor({1, 3, 8, 8}, rng);
  Graph<double> g1, g2;
  auto y1 = g1.dropout(g1.input(x), 0.3, true, 77);
  auto y2 = g2.dropout(g2.input(x), 0.3, true, 77);
  CHECK(g1.value(y1).data == g2.value(y2).data);
}

TEST_CASE("backward: elementwise linear case dL/dw == x") {
  std::mt19937_64 rng(21);
  Tensor<double> x = random_tensor({2, 5}, rng);
  Graph<double> g;
  auto wid = g.param(random_tensor({2, 5}, rng));
  auto loss = g.sum(g.mul(wid, g.input(x)));
  g.backward(loss);
  CHECK(g.gradient(wid).data == x.data);
}

TEST_CASE("backward: disconnected parameter gets zero gradient") {
  Graph<double> g;
  auto used = g.param(Tensor<double>::full({3}, 1.0));
  auto unused = g.param(Tensor<double>::full({4}, 1.0));
  auto loss = g.sum(used);
  g.backward(loss);
  CHECK(g.gradient(unused).shape == std::vector<int>{4});
  for (double v : g.gradient(unused).data) CHECK(v == 0.0);
}

TEST_CASE("backward without forward / non-scalar loss rejected") {
  Graph<double> g;
  CHECK_THROWS_AS(g.backward({}), Error);
  auto v = g.input(Tensor<double>::zeros({2}));
  CHECK_THROWS_AS(g.backward(v), Error);
}

TEST_CASE("finite differences: every layer kind, rel err < 1e-4") {
  std::mt19937_64 rng(31);

  auto check_layer = [&](auto&& build, std::vector<int> pshape) {
    Tensor<double> p0 = random_tensor(pshape, rng);
    auto loss_at = [&](const std::vector<double>& flat) {
      Graph<double> g;
      auto pid = g.param(Tensor<double>::from(pshape, flat));
      auto loss = build(g, pid);
      return g.value(loss).data[0];
    };
    Graph<double> g;
    auto pid = g.param(p0);
    auto loss = build(g, pid);
    g.backward(loss);
    const double err =
        finite_diff_max_rel_err(loss_at, p0.data, g.gradient(pid).data);
    CHECK(err < 1e-4);
  };

  Tensor<double> x = random_tensor({2, 3, 8, 8}, rng);
  Tensor<double> tgt = random_tensor({2, 2, 4, 4}, rng);

  SUBCASE("conv weight, stride 2") {
    check_layer(
        [&](Graph<double>& g, auto pid) {
          auto y = g.conv2d(g.input(x), pid, g.input(Tensor<double>::zeros({2})), 2);
          return g.mse_loss(y, g.input(tgt));
        },
        {2, 3, 3, 3});
  }
  SUBCASE("conv input, stride 1, through tanh") {
    std::mt19937_64 r2(32);
    Tensor<double> w = random_tensor({2, 3, 3, 3}, r2);
    Tensor<double> tgt2 = random_tensor({1, 2, 4, 4}, r2);
    check_layer(
        [&](Graph<double>& g, auto pid) {
          auto y = g.tanh_op(g.conv2d(pid, g.input(w),
                                      g.input(Tensor<double>::zeros({2})), 1));
          return g.mse_loss(y, g.input(tgt2));
        },
        {1, 3, 4, 4});
  }
  SUBCASE("deconv weight, stride 2") {
    std::mt19937_64 r2(33);
    Tensor<double> xin = random_tensor({1, 3, 3, 3}, r2);
    Tensor<double> tgt2 = random_tensor({1, 2, 6, 6}, r2);
    check_layer(
        [&](Graph<double>& g, auto pid) {
          auto y = g.deconv2d(g.input(xin), pid,
                              g.input(Tensor<double>::zeros({2})), 2);
          return g.mse_loss(y, g.input(tgt2));
        },
        {3, 2, 3, 3});
  }
  SUBCASE("prelu slope") {
    std::mt19937_64 r2(34);
    Tensor<double> xin = random_tensor({2, 4, 4, 4}, r2);
    Tensor<double> tgt2 = random_tensor({2, 4, 4, 4}, r2);
    check_layer(
        [&](Graph<double>& g, auto pid) {
          return g.mse_loss(g.prelu(g.input(xin), pid), g.input(tgt2));
        },
        {4});
  }
  SUBCASE("bias through prelu") {
    std::mt19937_64 r2(35);
    Tensor<double> xin = random_tensor({1, 2, 4, 4}, r2);
    Tensor<double> w = random_tensor({2, 2, 3, 3}, r2);
    Tensor<double> a = random_tensor({2}, r2, 0.4);
    Tensor<double> tgt2 = random_tensor({1, 2, 4, 4}, r2);
    check_layer(
        [&](Graph<double>& g, auto pid) {
          auto y = g.conv2d(g.input(xin), g.input(w), pid, 1);
          return g.mse_loss(g.prelu(y, g.input(a)), g.input(tgt2));
        },
        {2});
  }
  SUBCASE("dropout with fixed mask") {
    std::mt19937_64 r2(36);
    Tensor<double> tgt2 = random_tensor({1, 2, 4, 4}, r2);
    check_layer(
        [&](Graph<double>& g, auto pid) {
          return g.mse_loss(g.dropout(pid, 0.4, true, 99), g.input(tgt2));
        },
        {1, 2, 4, 4});
  }
  SUBCASE("straight-through quantizer passes gradients unchanged") {
    std::mt19937_64 r2(37);
    Tensor<double> p0 = random_tensor({1, 3, 2, 2}, r2, 0.9);
    Graph<double> g;
    auto pid = g.param(p0);
    auto loss = g.sum(g.fake_quant_u8(pid));
    g.backward(loss);
    for (double v : g.gradient(pid).data) CHECK(v == 1.0);
  }
}

TEST_CASE("determinism: fixed seed makes forward+backward bit-reproducible") {
  auto run = [](std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Tensor<double> x = random_tensor({1, 2, 4, 4}, rng);
    Tensor<double> w = random_tensor({2, 2, 3, 3}, rng);
    Graph<double> g;
    auto wid = g.param(w);
    auto y = g.dropout(g.conv2d(g.input(x), wid, g.param(Tensor<double>::zeros({2})), 1),
                       0.3, true, seed);
    auto loss = g.mse_loss(y, g.input(Tensor<double>::zeros(g.value(y).shape)));
    g.backward(loss);
    return std::make_pair(g.value(loss).data[0], g.gradient(wid).data);
  };
  auto [l1, g1] = run(42);
  auto [l2, g2] = run(42);
  CHECK(l1 == l2);
  CHECK(g1 == g2);
}

TEST_CASE("adam: zero gradient leaves parameters unchanged") {
  Adam<double> opt(1e-2);
  std::map<std::string, Tensor<double>> params{{"p", Tensor<double>::from({2}, {1.0, -2.0})}};
  std::map<std::string, Tensor<double>> grads{{"p", Tensor<double>::zeros({2})}};
  opt.step(params, grads);
  CHECK(params["p"].data == std::vector<double>{1.0, -2.0});
}

TEST_CASE("adam: unit gradient first step moves by about lr") {
  // Hand-rolled oracle: m1=0.1, v1=0.001, mhat=1, vhat=1,
  // delta = lr * 1 / (1 + eps).
  const double lr = 1e-4;
  Adam<double> opt(lr);
  std::map<std::string, Tensor<double>> params{{"p", Tensor<double>::from({1}, {0.5})}};
  std::map<std::string, Tensor<double>> grads{{"p", Tensor<double>::from({1}, {1.0})}};
  opt.step(params, grads);
  const double expected = 0.5 - lr * 1.0 / (1.0 + 1e-8);
  CHECK(params["p"].data[0] == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("adam: identical params with identical grads stay identical") {
  Adam<double> opt(1e-3);
  std::map<std::string, Tensor<double>> params{
      {"a", Tensor<double>::from({2}, {0.3, 0.3})},
      {"b", Tensor<double>::from({2}, {0.3, 0.3})}};
  std::map<std::string, Tensor<double>> grads{
      {"a", Tensor<double>::from({2}, {0.7, 0.7})},
      {"b", Tensor<double>::from({2}, {0.7, 0.7})}};
  for (int i = 0; i < 5; ++i) opt.step(params, grads);
  CHECK(params["a"].data == params["b"].data);
  CHECK(params["a"].data[0] == params["a"].data[1]);
}

TEST_CASE("adam: NaN gradient reported with parameter name") {
  Adam<double> opt(1e-3);
  std::map<std::string, Tensor<double>> params{{"layer.w", Tensor<double>::from({1}, {0.0})}};
  std::map<std::string, Tensor<double>> grads{
      {"layer.w", Tensor<double>::from({1}, {std::nan("")})}};
  CHECK_THROWS_WITH_AS(opt.step(params, grads), doctest::Contains("layer.w"), Error);
}
