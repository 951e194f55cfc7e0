#include "creo/core/types.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "creo/core/error.hpp"

namespace creo {

std::string_view stage_name(StageId stage) {
  switch (stage) {
    case StageId::kViewpoint: return "Viewpoint";
    case StageId::kComposition: return "Composition";
    case StageId::kColor: return "Color";
    case StageId::kLighting: return "Lighting";
    case StageId::kStyle: return "Style";
  }
  return "Unknown";
}

StageId parse_stage(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (StageId s : kAllStages) {
    std::string canon(stage_name(s));
    std::transform(canon.begin(), canon.end(), canon.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (canon == lower) return s;
  }
  fail(ErrorCode::kInvalidArgument, "unknown stage '" + std::string(name) + "'");
}

void validate_light(const LightSpec& light) {
  auto in = [](double v, double lo, double hi) { return std::isfinite(v) && v >= lo && v <= hi; };
  if (!in(light.intensity, 0.0, 1.0)) fail(ErrorCode::kInvalidArgument, "light intensity outside [0,1]");
  if (light.kind == LightSpec::Kind::kAmbient) {
    if (light.azimuth_deg != 0.0 || light.elevation_deg != 0.0) {
      fail(ErrorCode::kInvalidArgument, "ambient light must store azimuth = elevation = 0");
    }
    return;
  }
  if (!std::isfinite(light.azimuth_deg) || light.azimuth_deg < 0.0 || light.azimuth_deg >= 360.0) {
    fail(ErrorCode::kInvalidArgument, "light azimuth outside [0,360)");
  }
  if (!in(light.elevation_deg, 0.0, 90.0)) fail(ErrorCode::kInvalidArgument, "light elevation outside [0,90]");
}

void validate_palette_color(const PaletteColor& color) {
  for (float c : color.rgb) {
    if (!std::isfinite(c) || c < 0.0f || c > 1.0f) {
      fail(ErrorCode::kInvalidArgument, "palette colour component outside [0,1]");
    }
  }
}

Mask LockSet::locked_mask(StageId stage, int width, int height) const {
  if (fully_locked(stage)) return Mask::full(width, height);
  Mask out(width, height);
  auto it = region_locks.find(stage);
  if (it == region_locks.end()) return out;
  for (const auto& lock : it->second) {
    if (!lock.mask.same_size(width, height)) {
      fail(ErrorCode::kDimensionMismatch, "region lock does not match canvas size");
    }
    out = out | lock.mask;
  }
  return out;
}

bool LockSet::has_lock(std::uint64_t id) const {
  for (const auto& [stage, lock_id] : stage_locks) {
    if (lock_id == id) return true;
  }
  for (const auto& [stage, locks] : region_locks) {
    for (const auto& lock : locks) {
      if (lock.id == id) return true;
    }
  }
  return false;
}

LayerKind layer_of(StageId stage) {
  switch (stage) {
    case StageId::kViewpoint:
    case StageId::kComposition: return LayerKind::kInk;
    case StageId::kColor: return LayerKind::kChroma;
    case StageId::kLighting: return LayerKind::kShading;
    case StageId::kStyle: return LayerKind::kStyle;
  }
  return LayerKind::kStyle;
}

DecisionState DecisionState::blank(int width, int height) {
  DecisionState s;
  s.composition = SharedRaster(Raster(width, height, 1, 0.0f));
  s.chroma = SharedRaster(Raster(width, height, 3, 1.0f));
  s.shading = SharedRaster(Raster(width, height, 1, 1.0f));
  return s;
}

void validate_state(const DecisionState& state) {
  const int w = state.width();
  const int h = state.height();
  if (state.composition->channels() != 1 || state.shading->channels() != 1 || state.chroma->channels() != 3) {
    fail(ErrorCode::kChannelMismatch, "decision state layers have wrong channel counts");
  }
  if (!state.chroma->same_size(w, h) || !state.shading->same_size(w, h)) {
    fail(ErrorCode::kDimensionMismatch, "decision state layers differ in size");
  }
}

}  // namespace creo
