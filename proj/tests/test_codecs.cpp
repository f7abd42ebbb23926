#include <doctest.h>

#include <cstdlib>

#include "lhic/builtin_codecs.hpp"
#include "lhic/external_codecs.hpp"
#include "lhic/image_io.hpp"
#include "lhic/metrics.hpp"
#include "test_helpers.hpp"

using namespace lhic;
using lhic::test::random_image;
using lhic::test::smooth_image;

TEST_CASE("builtin lossless: random images round-trip bit-exactly") {
  BuiltinLossless codec;
  std::mt19937_64 rng(1);
  for (int rep = 0; rep < 30; ++rep) {
    const int w = 1 + static_cast<int>(rng() % 64);
    const int h = 1 + static_cast<int>(rng() % 64);
    ImageU8 img = random_image(w, h, rng());
    ImageU8 back = codec.decode(codec.encode(img));
    CHECK(back == img);
  }
}

TEST_CASE("builtin lossless: 1x1 and flat images") {
  BuiltinLossless codec;
  ImageU8 tiny(1, 1);
  tiny.at(0, 0, 0) = 7; tiny.at(0, 0, 1) = 200; tiny.at(0, 0, 2) = 0;
  CHECK(codec.decode(codec.encode(tiny)) == tiny);

  ImageU8 flat(64, 64);
  for (auto& v : flat.data) v = 42;
  auto bytes = codec.encode(flat);
  CHECK(codec.decode(bytes) == flat);
  CHECK(bytes.size() < flat.data.size() / 4);  // flat content compresses well
}

TEST_CASE("builtin lossless: garbage input rejected") {
  BuiltinLossless codec;
  CHECK_THROWS_AS(codec.decode({}), Error);
  CHECK_THROWS_AS(codec.decode({'X', 'Y', 0, 0, 0, 0}), Error);
}

TEST_CASE("builtin lossy: dimensions preserved at odd sizes") {
  BuiltinLossy codec;
  ImageU8 img = smooth_image(63, 47, 4);
  ImageU8 back = codec.decode(codec.encode(img, 8));
  CHECK(back.width == 63);
  CHECK(back.height == 47);
}

TEST_CASE("builtin lossy: PSNR decreases as the step grows") {
  BuiltinLossy codec;
  ImageU8 img = smooth_image(64, 64, 9);
  double prev = 1e9;
  for (int step : {1, 4, 16, 64}) {
    ImageU8 back = codec.decode(codec.encode(img, step));
    const double p = psnr(img, back);
    CHECK(p < prev + 1e-9);
    prev = p;
  }
}

TEST_CASE("builtin lossy: unit step reconstructs above 50 dB") {
  BuiltinLossy codec;
  ImageU8 img = smooth_image(64, 64, 10);
  ImageU8 back = codec.decode(codec.encode(img, 1));
  CHECK(psnr(img, back) > 50.0);
}

TEST_CASE("builtin lossy: huge step approaches the blockwise DC image") {
  BuiltinLossy codec;
  ImageU8 img = smooth_image(32, 32, 12);
  ImageU8 back = codec.decode(codec.encode(img, 100000));
  // every 8x8 block of the decode must be constant (only DC survives)
  for (int by = 0; by < 32; by += 8)
    for (int bx = 0; bx < 32; bx += 8)
      for (int c = 0; c < 3; ++c)
        for (int y = by; y < by + 8; ++y)
          for (int x = bx; x < bx + 8; ++x)
            CHECK(back.at(x, y, c) == back.at(bx, by, c));
  // and that constant should be near the block mean
  double mean = 0;
  for (int y = 0; y < 8; ++y)
    for (int x = 0; x < 8; ++x) mean += img.at(x, y, 0);
  mean /= 64;
  CHECK(std::abs(mean - back.at(0, 0, 0)) < 2.0);
}

TEST_CASE("builtin lossy: quality outside the domain rejected") {
  BuiltinLossy codec;
  ImageU8 img = smooth_image(8, 8, 1);
  CHECK_THROWS_AS(codec.encode(img, 0), Error);
  CHECK_THROWS_AS(codec.encode(img, -5), Error);
  CHECK_THROWS_AS(codec.encode(img, 100001), Error);
}

TEST_CASE("lossless-as-lossy wrapper is bit exact and id 3") {
  LosslessAsLossy codec;
  CHECK(codec.id() == kLossyViaLosslessId);
  ImageU8 img = random_image(17, 9, 5);
  CHECK(codec.decode(codec.encode(img, 0)) == img);
}

TEST_CASE("factories map names and ids") {
  CHECK(make_lossless_codec("builtin")->id() == kLosslessBuiltinId);
  CHECK(make_lossy_codec("builtin")->id() == kLossyBuiltinId);
  CHECK(make_lossy_codec("lossless")->id() == kLossyViaLosslessId);
  CHECK_THROWS_AS(make_lossless_codec("nope"), Error);
  CHECK_THROWS_AS(make_lossy_codec("nope"), Error);
  CHECK(lossless_codec_by_id(kLosslessBuiltinId)->name() == "builtin");
  CHECK(lossy_codec_by_id(kLossyViaLosslessId)->name() == "lossless");
  CHECK_THROWS_AS(lossless_codec_by_id(99), Error);
}

TEST_CASE("png: encode/decode round trip") {
  ImageU8 img = random_image(21, 13, 6);
  auto bytes = encode_png(img);
  CHECK(decode_png(bytes) == img);
  CHECK_THROWS_AS(decode_png({1, 2, 3}), Error);
}

TEST_CASE("missing external binary reported with the env var name") {
  ExternalToolConfig cfg;
  cfg.flif_path = "/nonexistent/flif-binary";
  cfg.bpgenc_path = "/nonexistent/bpgenc-binary";
  cfg.bpgdec_path = "/nonexistent/bpgdec-binary";
  CHECK_THROWS_WITH_AS(FlifCodec{cfg}, doctest::Contains("LHIC_FLIF_PATH"), Error);
  CHECK_THROWS_WITH_AS(BpgCodec{cfg}, doctest::Contains("LHIC_BPG"), Error);
}

TEST_CASE("flif adapter round trip" * doctest::skip(!tool_available(ExternalToolConfig::from_env().flif_path))) {
  FlifCodec codec;
  ImageU8 img = smooth_image(24, 16, 7);
  CHECK(codec.decode(codec.encode(img)) == img);
}

TEST_CASE("bpg adapter decodes its own output" * doctest::skip(!(tool_available(ExternalToolConfig::from_env().bpgenc_path) && tool_available(ExternalToolConfig::from_env().bpgdec_path)))) {
  BpgCodec codec;
  ImageU8 img = smooth_image(24, 16, 8);
  ImageU8 back = codec.decode(codec.encode(img, 25));
  CHECK(back.width == 24);
  CHECK(back.height == 16);
  CHECK(psnr(img, back) > 25.0);
}
