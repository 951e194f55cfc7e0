#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "creo/core/error.hpp"
#include "creo/core/hash.hpp"
#include "creo/gen/generators.hpp"
#include "creo/pipeline/stage_pipeline.hpp"
#include "creo/raster/ops.hpp"

namespace creo::gen {

namespace {

class SketchPen {
 public:
  SketchPen(int width, int height) : canvas_(width, height, 1), radius_(std::max(0.5f, std::min(width, height) / 200.0f)) {}

  void polyline(std::vector<Point2> pts) {
    raster::Stroke s;
    s.points = std::move(pts);
    s.radius = radius_;
    s.ink = 1.0f;
    canvas_ = raster::render_stroke(canvas_, s);
  }

  void line(double x0, double y0, double x1, double y1) {
    polyline({{static_cast<float>(x0), static_cast<float>(y0)}, {static_cast<float>(x1), static_cast<float>(y1)}});
  }

  void ellipse(double cx, double cy, double rx, double ry) {
    constexpr int kSegments = 40;
    std::vector<Point2> pts;
    for (int k = 0; k <= kSegments; ++k) {
      const double a = 2.0 * std::numbers::pi * k / kSegments;
      pts.push_back({static_cast<float>(cx + rx * std::cos(a)), static_cast<float>(cy + ry * std::sin(a))});
    }
    polyline(std::move(pts));
  }

  Raster take() { return std::move(canvas_); }

 private:
  Raster canvas_;
  float radius_;
};

// Layout driven entirely by the seeded engine: a horizon whose height encodes
// the camera pitch, perspective guides to a vanishing point, and a handful of
// primitive outlines.
Raster procedural_sketch(std::uint64_t key, int width, int height) {
  std::mt19937_64 rng(key);
  auto uniform = [&rng](double lo, double hi) { return lo + (hi - lo) * unit_double(rng()); };
  const double w = width - 1;
  const double h = height - 1;
  SketchPen pen(width, height);

  const double horizon = h * uniform(0.2, 0.8);
  const double tilt = h * uniform(-0.08, 0.08);
  pen.line(0, horizon - tilt, w, horizon + tilt);

  const double vx = w * uniform(0.2, 0.8);
  const double vy = horizon + tilt * (2.0 * vx / std::max(w, 1.0) - 1.0);
  pen.line(vx, vy, w * uniform(-0.3, 0.2), h);
  pen.line(vx, vy, w * uniform(0.8, 1.3), h);

  const int objects = 2 + static_cast<int>(rng() % 3);
  for (int i = 0; i < objects; ++i) {
    const double cx = w * uniform(0.15, 0.85);
    const double cy = h * uniform(0.25, 0.85);
    const double sx = w * uniform(0.06, 0.22);
    const double sy = h * uniform(0.06, 0.22);
    switch (rng() % 3) {
      case 0:
        pen.polyline({{static_cast<float>(cx - sx), static_cast<float>(cy - sy)},
                      {static_cast<float>(cx + sx), static_cast<float>(cy - sy)},
                      {static_cast<float>(cx + sx), static_cast<float>(cy + sy)},
                      {static_cast<float>(cx - sx), static_cast<float>(cy + sy)},
                      {static_cast<float>(cx - sx), static_cast<float>(cy - sy)}});
        break;
      case 1:
        pen.ellipse(cx, cy, sx, sy);
        break;
      default:
        pen.polyline({{static_cast<float>(cx), static_cast<float>(cy - sy)},
                      {static_cast<float>(cx + sx), static_cast<float>(cy + sy)},
                      {static_cast<float>(cx - sx), static_cast<float>(cy + sy)},
                      {static_cast<float>(cx), static_cast<float>(cy - sy)}});
        break;
    }
  }
  return pen.take();
}

PaletteColor palette_entry(const DecisionState& state, const std::string& index_text) {
  std::size_t pos = 0;
  long long index = -1;
  try {
    index = std::stoll(index_text, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != index_text.size() || index < 0) {
    fail(ErrorCode::kUnknownInstruction, "fill expects a palette index, got '" + index_text + "'");
  }
  if (static_cast<std::size_t>(index) >= state.palette.size()) {
    fail(ErrorCode::kInvalidArgument, "palette index " + index_text + " out of range");
  }
  return state.palette[static_cast<std::size_t>(index)];
}

}  // namespace

std::vector<Raster> MockBackend::viewpoints(const std::string& prompt, int count, std::uint64_t seed, int width,
                                            int height) {
  std::vector<Raster> out;
  const std::uint64_t base = hash_combine(fnv1a(prompt), seed);
  for (int i = 0; i < count; ++i) {
    std::uint64_t attempt = 0;
    Raster sketch = procedural_sketch(hash_combine(base, static_cast<std::uint64_t>(i)), width, height);
    // Tiny canvases can collide; re-roll until every candidate is distinct.
    while (std::find(out.begin(), out.end(), sketch) != out.end() && attempt < 64) {
      ++attempt;
      sketch = procedural_sketch(hash_combine(hash_combine(base, static_cast<std::uint64_t>(i)), attempt), width, height);
    }
    out.push_back(std::move(sketch));
  }
  return out;
}

Diff MockBackend::propose(const GenerationRequest& request, const Mask& effective) {
  const DecisionState& state = request.state;
  const std::string& instr = request.instruction;
  Diff diff;
  diff.target_stage = request.stage;

  switch (request.stage) {
    case StageId::kComposition:
      if (instr == "cleanup") {
        const Raster& ink = *state.composition;
        diff.patch = raster::thin_strokes(ink, effective);
        diff.mask = pipeline::changed_pixels(ink, diff.patch);
        return diff;
      }
      break;
    case StageId::kColor:
      if (instr.rfind("fill:", 0) == 0) {
        const PaletteColor color = palette_entry(state, instr.substr(5));
        const Mask* scribble = request.scribble ? &*request.scribble : request.mask ? &*request.mask : nullptr;
        if (scribble == nullptr) fail(ErrorCode::kInvalidArgument, "fill needs a scribble or mask");
        diff.mask = raster::fill_region(*state.composition, *scribble) & effective;
        diff.patch = *state.chroma;
        for (std::size_t i = 0; i < diff.mask.pixel_count(); ++i) {
          if (!diff.mask.test(i)) continue;
          for (int c = 0; c < 3; ++c) diff.patch.data()[i * 3 + c] = color.rgb[c];
        }
        return diff;
      }
      break;
    case StageId::kLighting:
      if (instr.rfind("vibe:", 0) == 0) {
        const auto rig = light_rig_preset(instr.substr(5));
        diff.patch = raster::shade_map(state.width(), state.height(), rig);
        diff.mask = effective;
        return diff;
      }
      break;
    case StageId::kStyle:
      if (instr == "apply") {
        diff.patch = raster::apply_style(pipeline::compose_unstyled(state), state.style);
        diff.mask = effective;
        return diff;
      }
      break;
    case StageId::kViewpoint:
      break;
  }
  fail(ErrorCode::kUnknownInstruction,
       "mock backend has no '" + instr + "' instruction for " + std::string(stage_name(request.stage)));
}

std::vector<LightSpec> light_rig_preset(const std::string& name) {
  if (name == "sunset") return {LightSpec::directional(180.0, 10.0, 0.8), LightSpec::ambient(0.2)};
  if (name == "noon") return {LightSpec::directional(90.0, 80.0, 0.5), LightSpec::ambient(0.5)};
  if (name == "overcast") return {LightSpec::ambient(0.85)};
  if (name == "neon-backlight") {
    return {LightSpec::directional(0.0, 5.0, 0.6), LightSpec::directional(180.0, 5.0, 0.4), LightSpec::ambient(0.1)};
  }
  fail(ErrorCode::kUnknownInstruction, "unknown lighting vibe '" + name + "'");
}

const std::vector<std::string>& light_rig_names() {
  static const std::vector<std::string> names = {"sunset", "noon", "overcast", "neon-backlight"};
  return names;
}

}  // namespace creo::gen
