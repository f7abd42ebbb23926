#include <doctest.h>

#include <cstdlib>

#include "lhic/range_map.hpp"
#include "test_helpers.hpp"

using namespace lhic;

namespace {

ResidualImage single(std::int16_t v) {
  ResidualImage r(1, 1);
  for (auto& x : r.data) x = v;
  return r;
}

// Residual covering every value in [-255, 255] once (plus padding).
ResidualImage full_sweep() {
  ResidualImage r(1, 171);  // 171*3 = 513 slots
  for (int i = 0; i < 511; ++i) r.data[static_cast<size_t>(i)] = static_cast<std::int16_t>(i - 255);
  r.data[511] = 0;
  r.data[512] = 0;
  return r;
}

}  // namespace

TEST_CASE("normalize: endpoints and midpoint") {
  ImageU8 img(1, 1);
  img.at(0, 0, 0) = 0;
  img.at(0, 0, 1) = 255;
  img.at(0, 0, 2) = 127;
  auto t = normalize_u8(img);
  CHECK(t.shape == std::vector<int>{1, 3, 1, 1});
  CHECK(t.data[0] == -1.0f);
  CHECK(t.data[1] == 1.0f);
  CHECK(t.data[2] == doctest::Approx(127.0 / 255.0 * 2.0 - 1.0).epsilon(1e-7));
}

TEST_CASE("shift: worked examples and round-trip error bound") {
  CHECK(static_cast<int>(scale_shift(single(0)).at(0, 0, 0)) == 128);
  CHECK(static_cast<int>(scale_shift(single(-255)).at(0, 0, 0)) == 0);
  CHECK(static_cast<int>(scale_shift(single(255)).at(0, 0, 0)) == 255);
  CHECK(static_cast<int>(scale_shift(single(101)).at(0, 0, 0)) == 178);

  ResidualImage r = full_sweep();
  ResidualImage back = unscale_shift(scale_shift(r));
  for (size_t i = 0; i < r.data.size(); ++i)
    CHECK(std::abs(back.data[i] - r.data[i]) <= 1);
}

TEST_CASE("minmax: params, exact round trip when the range fits in 255") {
  ResidualImage r(2, 2);
  r.data = {-40, 0, 13, 200, -40, 7, 1, -2, 3, 4, 5, 6};
  ScalingParams p = minmax_params(r);
  CHECK(p.method == ScalingMethod::MinMax);
  CHECK(p.r_min == -40);
  CHECK(p.r_max == 200);
  ImageU8 u = scale_minmax(r, p);
  CHECK(unscale_minmax(u, p) == r);  // range 240 <= 255, must be exact
}

TEST_CASE("minmax with bounds (-255,255) is bit-identical to shift") {
  ResidualImage r = full_sweep();
  ScalingParams p{ScalingMethod::MinMax, -255, 255};
  CHECK(scale_minmax(r, p) == scale_shift(r));
  ImageU8 u = scale_shift(r);
  ResidualImage a = unscale_minmax(u, p);
  ResidualImage b = unscale_shift(u);
  CHECK(a == b);
}

TEST_CASE("minmax: degenerate flat residual decodes to the constant") {
  ResidualImage r(3, 2);
  for (auto& v : r.data) v = -17;
  ScalingParams p = minmax_params(r);
  CHECK(p.degenerate());
  ImageU8 u = scale_minmax(r, p);
  for (auto v : u.data) CHECK(v == 0);
  CHECK(unscale_minmax(u, p) == r);
}

TEST_CASE("clip: clamps to the bound then round-trips exactly") {
  ResidualImage r = full_sweep();
  ScalingParams p;
  ImageU8 u = scale_clip(r, &p, 120);
  CHECK(p.method == ScalingMethod::Clip);
  CHECK(p.r_min == -120);
  CHECK(p.r_max == 120);
  ResidualImage back = unscale_clip(u, p);
  for (size_t i = 0; i < r.data.size(); ++i) {
    const int want = std::clamp<int>(r.data[i], -120, 120);
    CHECK(back.data[i] == want);
  }
  CHECK_THROWS_AS(scale_clip(r, &p, 0), Error);
  CHECK_THROWS_AS(scale_clip(r, &p, 400), Error);
}

TEST_CASE("scalings are monotone over the full sweep") {
  ResidualImage r = full_sweep();
  ScalingParams mm = minmax_params(r);
  ScalingParams cp;
  ImageU8 us = scale_shift(r);
  ImageU8 um = scale_minmax(r, mm);
  ImageU8 uc = scale_clip(r, &cp, 120);
  for (size_t i = 0; i + 1 < 511; ++i) {
    // sweep is ascending in i
    CHECK(us.data[i] <= us.data[i + 1]);
    CHECK(um.data[i] <= um.data[i + 1]);
    CHECK(uc.data[i] <= uc.data[i + 1]);
  }
}

TEST_CASE("shift is injective on even residuals and ties round away from zero") {
  // round-half-away: r=1 -> (1+255)/2 = 128 exactly; r=-1 -> 127
  CHECK(static_cast<int>(scale_shift(single(1)).at(0, 0, 0)) == 128);
  CHECK(static_cast<int>(scale_shift(single(-1)).at(0, 0, 0)) == 127);
  // even residuals map without collision
  ImageU8 prev = scale_shift(single(-254));
  for (int v = -252; v <= 254; v += 2) {
    ImageU8 cur = scale_shift(single(static_cast<std::int16_t>(v)));
    CHECK(cur.at(0, 0, 0) > prev.at(0, 0, 0));
    prev = cur;
  }
}

TEST_CASE("dispatch helpers route to the right implementation") {
  ResidualImage r = full_sweep();
  ScalingParams p;
  ImageU8 u = scale_residual(r, ScalingMethod::Shift, &p);
  CHECK(p.method == ScalingMethod::Shift);
  CHECK(u == scale_shift(r));
  CHECK(unscale_residual(u, p) == unscale_shift(u));

  u = scale_residual(r, ScalingMethod::MinMax, &p);
  CHECK(p.method == ScalingMethod::MinMax);
  // the full sweep spans 510 > 255, so minmax is approximate here
  ResidualImage back = unscale_residual(u, p);
  for (size_t i = 0; i < r.data.size(); ++i)
    CHECK(std::abs(back.data[i] - r.data[i]) <= 1);
}

TEST_CASE("method names round trip") {
  for (ScalingMethod m : {ScalingMethod::Shift, ScalingMethod::MinMax, ScalingMethod::Clip})
    CHECK(scaling_method_from_name(scaling_method_name(m)) == m);
  CHECK_THROWS_AS(scaling_method_from_name("bogus"), Error);
}
