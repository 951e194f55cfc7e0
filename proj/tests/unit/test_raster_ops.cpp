#include <doctest.h>

#include <cmath>
#include <deque>

#include "creo/raster/ops.hpp"
#include "support/test_support.hpp"

using namespace creo;
using namespace creo::raster;
using namespace creo::test;

namespace {

Stroke point_stroke(float x, float y, float radius, float ink = 1.0f) {
  Stroke s;
  s.points = {{x, y}};
  s.radius = radius;
  s.ink = ink;
  return s;
}

// Brute-force BFS flood fill used as the oracle for palette_fill.
Mask flood_oracle(const Raster& sketch, const Mask& scribble) {
  const int w = sketch.width(), h = sketch.height();
  Mask out(w, h);
  std::deque<std::pair<int, int>> q;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if (scribble.get(x, y) && sketch.at(x, y) <= 0.5f && !out.get(x, y)) {
        out.set(x, y);
        q.emplace_back(x, y);
      }
  while (!q.empty()) {
    auto [x, y] = q.front();
    q.pop_front();
    const int dx[] = {1, -1, 0, 0}, dy[] = {0, 0, 1, -1};
    for (int k = 0; k < 4; ++k) {
      const int nx = x + dx[k], ny = y + dy[k];
      if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
      if (out.get(nx, ny) || sketch.at(nx, ny) > 0.5f) continue;
      out.set(nx, ny);
      q.emplace_back(nx, ny);
    }
  }
  return out;
}

}  // namespace

TEST_CASE("render_stroke") {
  const Raster blank(3, 3, 1, 0.0f);
  SUBCASE("point stroke is a plus shape") {
    const Raster r = render_stroke(blank, point_stroke(1, 1, 1));
    for (int y = 0; y < 3; ++y)
      for (int x = 0; x < 3; ++x) {
        const bool plus = (x == 1 || y == 1);
        CHECK(r.at(x, y) == (plus ? 1.0f : 0.0f));
      }
  }
  SUBCASE("idempotent") {
    const Raster once = render_stroke(blank, point_stroke(1, 1, 1));
    CHECK(render_stroke(once, point_stroke(1, 1, 1)) == once);
  }
  SUBCASE("zero ink is a no-op") {
    std::mt19937_64 rng(3);
    const Raster canvas = random_raster(rng, 3, 3, 1);
    CHECK(render_stroke(canvas, point_stroke(1, 1, 2, 0.0f)) == canvas);
  }
  SUBCASE("empty stroke") {
    Stroke s;
    CHECK_ERROR_CODE(render_stroke(blank, s), ErrorCode::kEmptyStroke);
  }
  SUBCASE("non-positive radius") { CHECK_ERROR_CODE(render_stroke(blank, point_stroke(1, 1, 0)), ErrorCode::kInvalidArgument); }
}

TEST_CASE("erase_region") {
  std::mt19937_64 rng(4);
  const Raster canvas = random_raster(rng, 8, 6, 1);
  CHECK(erase_region(canvas, Mask(8, 6)) == canvas);
  CHECK(erase_region(canvas, Mask::full(8, 6)) == Raster(8, 6, 1, 0.0f));
  CHECK_ERROR_CODE(erase_region(canvas, Mask(6, 8)), ErrorCode::kDimensionMismatch);
  SUBCASE("erase then redraw equals drawing on the erased canvas") {
    const Mask m = random_mask(rng, 8, 6);
    Stroke s;
    s.points = {{1, 1}, {6, 4}};
    s.radius = 1.2f;
    const Raster erased = erase_region(canvas, m);
    const Raster redrawn = render_stroke(erased, s);
    Raster oracle = erased;
    const Mask cover = stroke_coverage(8, 6, s);
    for (std::size_t i = 0; i < cover.pixel_count(); ++i)
      if (cover.test(i)) oracle.data()[i] = std::max(oracle.data()[i], 1.0f);
    CHECK(redrawn == oracle);
  }
}

TEST_CASE("lasso_transform") {
  Raster one(3, 3, 1, 0.0f);
  one.at(0, 0) = 1.0f;
  const Mask m = rect_mask(3, 3, 0, 0, 0, 0);
  CHECK(lasso_transform(one, m, AffineTransform{}) == one);
  Raster moved = lasso_transform(one, m, AffineTransform::translation(2, 2));
  Raster expect(3, 3, 1, 0.0f);
  expect.at(2, 2) = 1.0f;
  CHECK(moved == expect);
  CHECK(lasso_transform(one, m, AffineTransform::translation(10, 0)) == Raster(3, 3, 1, 0.0f));
  CHECK_ERROR_CODE(lasso_transform(one, m, AffineTransform{{1, 2, 0, 2, 4, 0}}), ErrorCode::kSingularTransform);
  CHECK_ERROR_CODE(lasso_transform(one, Mask(2, 2), AffineTransform{}), ErrorCode::kDimensionMismatch);
}

TEST_CASE("masked_composite") {
  const Raster base(2, 2, 1, 0.0f), patch(2, 2, 1, 1.0f);
  CHECK(masked_composite(base, patch, Mask(2, 2)) == base);
  CHECK(masked_composite(base, patch, Mask::full(2, 2)) == patch);
  const Raster r = masked_composite(base, patch, rect_mask(2, 2, 0, 0, 0, 0));
  CHECK(r.at(0, 0) == 1.0f);
  CHECK(r.at(1, 0) == 0.0f);
  CHECK(r.at(0, 1) == 0.0f);
  CHECK(r.at(1, 1) == 0.0f);
  CHECK_ERROR_CODE(masked_composite(base, Raster(2, 2, 3), Mask(2, 2)), ErrorCode::kChannelMismatch);
  CHECK_ERROR_CODE(masked_composite(base, patch, Mask(3, 2)), ErrorCode::kDimensionMismatch);
}

TEST_CASE("property: masked_composite locality") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 50; ++t) {
    const int w = 1 + static_cast<int>(rng() % 20), h = 1 + static_cast<int>(rng() % 20);
    const int ch = (rng() & 1) ? 3 : 1;
    const Raster base = random_raster(rng, w, h, ch), patch = random_raster(rng, w, h, ch);
    const Mask m = random_mask(rng, w, h);
    const Raster out = masked_composite(base, patch, m);
    CHECK(all_equal_outside(out, base, m));
    CHECK(all_equal_outside(out, patch, ~m));
  }
}

TEST_CASE("property: stroke monotonicity") {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 50; ++t) {
    const Raster canvas = random_raster(rng, 16, 12, 1);
    Stroke s;
    for (int k = 0; k < 3; ++k) s.points.push_back({uniform01(rng) * 16, uniform01(rng) * 12});
    s.radius = 0.5f + uniform01(rng) * 3;
    s.ink = uniform01(rng);
    const Raster drawn = render_stroke(canvas, s);
    s.mode = Stroke::Mode::kErase;
    const Raster erased = render_stroke(canvas, s);
    for (std::size_t i = 0; i < canvas.data().size(); ++i) {
      CHECK(drawn.data()[i] >= canvas.data()[i]);
      CHECK(erased.data()[i] <= canvas.data()[i]);
    }
  }
}

TEST_CASE("palette_fill") {
  const PaletteColor green{{0.1f, 0.8f, 0.2f}, "green"};
  const Raster chroma(5, 5, 3, 1.0f);
  Raster box(5, 5, 1, 0.0f);
  for (int i = 1; i <= 3; ++i) {
    box.at(i, 1) = box.at(i, 3) = box.at(1, i) = box.at(3, i) = 1.0f;
  }
  SUBCASE("scribble on ink only") {
    CHECK(palette_fill(box, rect_mask(5, 5, 1, 1, 3, 1), green, chroma) == chroma);
  }
  SUBCASE("box interior") {
    const Raster out = palette_fill(box, rect_mask(5, 5, 2, 2, 2, 2), green, chroma);
    for (int y = 0; y < 5; ++y)
      for (int x = 0; x < 5; ++x)
        for (int c = 0; c < 3; ++c) CHECK(out.at(x, y, c) == ((x == 2 && y == 2) ? green.rgb[c] : 1.0f));
  }
  SUBCASE("blank sketch fills everything") {
    const Raster out = palette_fill(Raster(5, 5, 1, 0.0f), rect_mask(5, 5, 4, 4, 4, 4), green, chroma);
    for (int y = 0; y < 5; ++y)
      for (int x = 0; x < 5; ++x) CHECK(out.at(x, y, 1) == green.rgb[1]);
  }
  SUBCASE("dimension mismatch") {
    CHECK_ERROR_CODE(palette_fill(box, Mask(4, 4), green, chroma), ErrorCode::kDimensionMismatch);
  }
}

TEST_CASE("property: palette_fill matches BFS oracle and spares inked pixels") {
  std::mt19937_64 rng(7);
  const PaletteColor c{{0.3f, 0.2f, 0.9f}, ""};
  for (int t = 0; t < 40; ++t) {
    const Raster sketch = random_raster(rng, 14, 11, 1);
    const Raster chroma = random_raster(rng, 14, 11, 3);
    const Mask scribble = random_mask(rng, 14, 11, 0.03);
    const Raster out = palette_fill(sketch, scribble, c, chroma);
    const Mask expect = flood_oracle(sketch, scribble);
    CHECK(fill_region(sketch, scribble) == expect);
    for (int y = 0; y < 11; ++y)
      for (int x = 0; x < 14; ++x)
        for (int ch = 0; ch < 3; ++ch) {
          const float want = expect.get(x, y) ? c.rgb[ch] : chroma.at(x, y, ch);
          CHECK(out.at(x, y, ch) == want);
          if (sketch.at(x, y) > 0.5f) CHECK(out.at(x, y, ch) == chroma.at(x, y, ch));
        }
  }
}

TEST_CASE("shade_map") {
  const LightSpec amb = LightSpec::ambient(1.0);
  CHECK(shade_map(4, 3, std::vector<LightSpec>{amb}) == Raster(4, 3, 1, 1.0f));
  CHECK(shade_map(4, 3, std::vector<LightSpec>{}) == Raster(4, 3, 1, 0.0f));
  const LightSpec dir{LightSpec::Kind::kDirectional, 0.0, 0.0, 1.0};
  const Raster ramp = shade_map(3, 1, std::vector<LightSpec>{dir});
  CHECK(ramp.at(0, 0) == 0.0f);
  CHECK(ramp.at(1, 0) == 0.5f);
  CHECK(ramp.at(2, 0) == 1.0f);
}

TEST_CASE("property: shade_map closed form, range and mirror symmetry") {
  std::mt19937_64 rng(8);
  const double kPi = std::acos(-1.0);
  for (int t = 0; t < 40; ++t) {
    const int w = 2 + static_cast<int>(rng() % 9), h = 2 + static_cast<int>(rng() % 9);
    std::vector<LightSpec> lights;
    const int n = static_cast<int>(rng() % 4);
    for (int k = 0; k < n; ++k) {
      if (rng() & 1) {
        lights.push_back(LightSpec::ambient(uniform01(rng)));
      } else {
        lights.push_back({LightSpec::Kind::kDirectional, uniform01(rng) * 359.0, uniform01(rng) * 90.0, uniform01(rng)});
      }
    }
    const Raster m = shade_map(w, h, lights);
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        const double u = 2.0 * x / (w - 1) - 1.0, v = 2.0 * y / (h - 1) - 1.0;
        double s = 0;
        for (const auto& l : lights) {
          if (l.kind == LightSpec::Kind::kAmbient) {
            s += l.intensity;
          } else {
            const double az = l.azimuth_deg * kPi / 180, el = l.elevation_deg * kPi / 180;
            s += l.intensity * (0.5 + 0.5 * (u * std::cos(az) * std::cos(el) + v * std::sin(az) * std::cos(el)));
          }
        }
        CHECK(m.at(x, y) >= 0.0f);
        CHECK(m.at(x, y) <= 1.0f);
        CHECK(m.at(x, y) == doctest::Approx(std::clamp(s, 0.0, 1.0)).epsilon(1e-6));
      }
    // A single el=0 directional light: value(u,v) + value(-u,-v) = 2 * midline.
    const LightSpec d{LightSpec::Kind::kDirectional, uniform01(rng) * 359.0, 0.0, uniform01(rng)};
    const Raster r = shade_map(w, h, std::vector<LightSpec>{d});
    const double mid = 0.5 * d.intensity;
    const double az = d.azimuth_deg * kPi / 180;
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        // Corners can push the ramp outside [0,1]; the identity holds before clamping only.
        const double u = 2.0 * x / (w - 1) - 1.0, v = 2.0 * y / (h - 1) - 1.0;
        if (std::abs(u * std::cos(az) + v * std::sin(az)) > 1.0) continue;
        CHECK(r.at(x, y) + r.at(w - 1 - x, h - 1 - y) == doctest::Approx(2 * mid).epsilon(1e-6));
      }
  }
}

TEST_CASE("apply_style") {
  std::mt19937_64 rng(9);
  const Raster img = random_raster(rng, 12, 9, 3);
  CHECK(apply_style(img, StyleSpec{}) == img);
  for (const auto& preset : style_presets()) {
    StyleSpec s{preset, {{"grain", 0.2}}, 42};
    const Raster a = apply_style(img, s), b = apply_style(img, s);
    CHECK(a == b);
    CHECK(samples_normalized(a));
    CHECK(a.same_shape(img));
  }
  const Raster pencil = apply_style(img, StyleSpec{"pencil", {}, 1});
  for (int y = 0; y < 9; ++y)
    for (int x = 0; x < 12; ++x) {
      CHECK(pencil.at(x, y, 0) == pencil.at(x, y, 1));
      CHECK(pencil.at(x, y, 1) == pencil.at(x, y, 2));
    }
  for (const char* p : {"identity", "pencil", "watercolor", "digital-paint", "photoreal-mock"}) CHECK(is_registered_preset(p));
  CHECK_ERROR_CODE(apply_style(img, StyleSpec{"oil", {}, 0}), ErrorCode::kUnknownPreset);
  SUBCASE("watercolor seed changes the noise") {
    const Raster a = apply_style(img, StyleSpec{"watercolor", {{"grain", 0.3}}, 1});
    const Raster b = apply_style(img, StyleSpec{"watercolor", {{"grain", 0.3}}, 2});
    CHECK_FALSE(a == b);
  }
}

TEST_CASE("decompose_image") {
  SUBCASE("uniform mid gray") {
    const auto d = decompose_image(Raster(6, 6, 3, 0.5f));
    CHECK(d.shading == Raster(6, 6, 1, 0.5f));
    CHECK(d.chroma == Raster(6, 6, 3, 1.0f));
    CHECK(d.composition == Raster(6, 6, 1, 0.0f));
  }
  SUBCASE("pure red") {
    Raster red(4, 4, 3, 0.0f);
    for (int y = 0; y < 4; ++y)
      for (int x = 0; x < 4; ++x) red.at(x, y, 0) = 1.0f;
    const auto d = decompose_image(red);
    CHECK(d.shading == Raster(4, 4, 1, 1.0f));
    CHECK(d.chroma == red);
  }
  SUBCASE("channel mismatch") { CHECK_ERROR_CODE(decompose_image(Raster(4, 4, 1)), ErrorCode::kChannelMismatch); }
  SUBCASE("black pixels get identity chroma") {
    const auto d = decompose_image(Raster(3, 3, 3, 0.0f));
    CHECK(d.chroma == Raster(3, 3, 3, 1.0f));
  }
  SUBCASE("edges become ink") {
    Raster img(8, 8, 3, 0.0f);
    for (int y = 0; y < 8; ++y)
      for (int x = 4; x < 8; ++x)
        for (int c = 0; c < 3; ++c) img.at(x, y, c) = 1.0f;
    const auto d = decompose_image(img);
    CHECK(d.composition.at(0, 4) == 0.0f);
    CHECK(d.composition.at(7, 4) == 0.0f);
    CHECK(d.composition.at(3, 4) == 1.0f);
    CHECK(d.composition.at(4, 4) == 1.0f);
  }
}

TEST_CASE("property: decompose_image reconstructs within 1e-6") {
  std::mt19937_64 rng(10);
  for (int t = 0; t < 30; ++t) {
    const Raster img = random_raster(rng, 10, 7, 3);
    const auto d = decompose_image(img);
    for (int y = 0; y < 7; ++y)
      for (int x = 0; x < 10; ++x) {
        const float s = d.shading.at(x, y);
        const float mx = std::max({img.at(x, y, 0), img.at(x, y, 1), img.at(x, y, 2)});
        CHECK(s == mx);
        if (s <= kBlackCutoff) continue;
        for (int c = 0; c < 3; ++c) CHECK(std::abs(d.chroma.at(x, y, c) * s - img.at(x, y, c)) <= 1e-6);
      }
    CHECK(samples_normalized(d.chroma));
    for (float v : d.composition.data()) CHECK((v == 0.0f || v == 1.0f));
  }
}

TEST_CASE("sobel and thinning helpers") {
  CHECK(sobel_magnitude(Raster(5, 5, 1, 0.7f)) == Raster(5, 5, 1, 0.0f));
  SUBCASE("thinning a thick bar leaves a thin line and only removes inside the region") {
    Raster bar(12, 7, 1, 0.0f);
    for (int y = 2; y <= 4; ++y)
      for (int x = 1; x <= 10; ++x) bar.at(x, y) = 1.0f;
    const Raster thin = thin_strokes(bar, Mask::full(12, 7));
    int ink = 0;
    for (float v : thin.data()) ink += v > 0.5f;
    CHECK(ink > 0);
    CHECK(ink < 30);
    CHECK(thin_strokes(thin, Mask::full(12, 7)) == thin);
    const Mask left = rect_mask(12, 7, 0, 0, 5, 6);
    const Raster part = thin_strokes(bar, left);
    CHECK(all_equal_outside(part, bar, left));
  }
}

TEST_CASE("value_noise is bounded and seeded") {
  for (int i = 0; i < 100; ++i) {
    const double v = value_noise(5, i * 0.37, i * 0.11, 4.0);
    CHECK(v >= -1.0);
    CHECK(v <= 1.0);
    CHECK(v == value_noise(5, i * 0.37, i * 0.11, 4.0));
  }
}

TEST_CASE("dilate") {
  Mask m(5, 4);
  m.set(0, 0);
  m.set(4, 3);
  const Mask d = dilate(m, 1);
  CHECK(d.count() == 8);
  CHECK(d.get(1, 1));
  CHECK(d.get(3, 2));
  CHECK_FALSE(d.get(2, 1));
  CHECK(dilate(m, 0) == m);
  CHECK(dilate(m, 10) == Mask::full(5, 4));
  CHECK_ERROR_CODE(dilate(m, -1), ErrorCode::kInvalidArgument);
}

TEST_CASE("property: styled output changes only within the preset footprint") {
  std::mt19937_64 rng(404);
  for (const auto& preset : style_presets()) {
    StyleSpec style;
    style.preset = preset;
    style.seed = 3;
    const int r = style_footprint(preset);
    for (int trial = 0; trial < 20; ++trial) {
      const Raster a = random_raster(rng, 12, 10, 3);
      Raster b = a;
      const Mask changed = random_mask(rng, 12, 10, 0.05);
      for (std::size_t i = 0; i < changed.pixel_count(); ++i) {
        if (changed.test(i)) b.data()[i * 3 + rng() % 3] = uniform01(rng);
      }
      CHECK_MESSAGE(all_equal_outside(apply_style(a, style), apply_style(b, style), dilate(changed, r)), preset);
    }
  }
  CHECK_ERROR_CODE(style_footprint("oil"), ErrorCode::kUnknownPreset);
}
