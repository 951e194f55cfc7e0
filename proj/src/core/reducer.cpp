#include "creo/core/reducer.hpp"

#include <algorithm>

#include "creo/core/error.hpp"
#include "creo/core/payload.hpp"
#include "creo/pipeline/stage_pipeline.hpp"
#include "creo/raster/ops.hpp"

namespace creo {

namespace {

using nlohmann::json;
using pipeline::propagate;

const Mask& require_mask(const EditEvent& e) {
  if (!e.mask) fail(ErrorCode::kInvalidArgument, "tool '" + e.tool + "' needs a mask");
  return *e.mask;
}

// Restricts a direct edit to the event mask when one is given.
Raster within_event_mask(const Raster& before, Raster after, const EditEvent& e) {
  if (!e.mask) return after;
  return raster::masked_composite(before, after, *e.mask);
}

PaletteColor resolve_color(const DecisionState& state, const json& p) {
  if (p.contains("rgb")) return payload::palette_color_from_json(p);
  const auto index = p.at("color").get<long long>();
  if (index < 0 || static_cast<std::size_t>(index) >= state.palette.size()) {
    fail(ErrorCode::kInvalidArgument, "palette index " + std::to_string(index) + " out of range");
  }
  return state.palette[static_cast<std::size_t>(index)];
}

DecisionState apply_diff_payload(const DecisionState& state, StageId stage, const json& diff) {
  auto [support, patch] = payload::diff_from_json(diff);
  const auto current = pipeline::layer_for(state, stage);
  const auto* layer = std::get_if<Raster>(&current);
  if (layer == nullptr) fail(ErrorCode::kInvalidArgument, "stage has no raster layer for a diff");
  return propagate(state, stage, raster::masked_composite(*layer, patch, support));
}

void require_unlocked(const DecisionState& state, StageId stage) {
  if (pipeline::layer_fully_locked(state.locks, layer_of(stage))) {
    fail(ErrorCode::kStageLocked, std::string(stage_name(stage)) + " is locked");
  }
}

DecisionState apply_lock(const DecisionState& state, const EditEvent& e) {
  DecisionState next = state;
  if (!e.mask) {
    if (state.locks.fully_locked(e.stage)) {
      fail(ErrorCode::kInvalidArgument, std::string(stage_name(e.stage)) + " is already locked");
    }
    next.locks.stage_locks[e.stage] = e.event_id;
    return next;
  }
  if (layer_of(e.stage) == LayerKind::kStyle || e.stage == StageId::kViewpoint) {
    fail(ErrorCode::kInvalidArgument, std::string(stage_name(e.stage)) + " supports whole-stage locks only");
  }
  if (!e.mask->any()) fail(ErrorCode::kInvalidArgument, "region lock mask is empty");
  next.locks.region_locks[e.stage].push_back(RegionLock{e.event_id, *e.mask});
  return next;
}

DecisionState apply_unlock(const DecisionState& state, const EditEvent& e) {
  const auto id = e.payload.at("lock_id").get<std::uint64_t>();
  DecisionState next = state;
  for (auto it = next.locks.stage_locks.begin(); it != next.locks.stage_locks.end(); ++it) {
    if (it->second == id) {
      next.locks.stage_locks.erase(it);
      return next;
    }
  }
  for (auto& [stage, regions] : next.locks.region_locks) {
    auto it = std::find_if(regions.begin(), regions.end(), [id](const RegionLock& r) { return r.id == id; });
    if (it != regions.end()) {
      regions.erase(it);
      if (regions.empty()) next.locks.region_locks.erase(stage);
      return next;
    }
  }
  fail(ErrorCode::kUnknownLock, "no lock with id " + std::to_string(id));
}

}  // namespace

DecisionState root_state(const EditEvent& root) {
  if (root.tool != kRootTool) fail(ErrorCode::kInvalidArgument, "root event must be '" + std::string(kRootTool) + "'");
  const json& p = root.payload;
  const int w = p.at("width").get<int>();
  const int h = p.at("height").get<int>();
  DecisionState state = DecisionState::blank(w, h);
  const auto mode = p.at("mode").get<std::string>();
  if (mode == "prompt_first") {
    for (const auto& c : p.at("candidates")) {
      Raster sketch = payload::raster_from_json(c);
      if (!sketch.same_size(w, h) || sketch.channels() != 1) {
        fail(ErrorCode::kDimensionMismatch, "viewpoint candidate does not match the canvas");
      }
      state.candidates.emplace_back(std::move(sketch));
    }
  } else if (mode == "image_first") {
    const Raster source = payload::raster_from_json(p.at("source"));
    if (!source.same_size(w, h)) fail(ErrorCode::kDimensionMismatch, "source image does not match the canvas");
    auto layers = raster::decompose_image(source);
    state.composition = SharedRaster(std::move(layers.composition));
    state.chroma = SharedRaster(std::move(layers.chroma));
    state.shading = SharedRaster(std::move(layers.shading));
    state.visited = {StageId::kComposition, StageId::kColor, StageId::kLighting};
  } else {
    fail(ErrorCode::kInvalidArgument, "unknown entry mode '" + mode + "'");
  }
  return state;
}

DecisionState apply_event(const DecisionState& state, const EditEvent& e) {
  const ToolInfo& tool = resolve_tool(e.stage, e.tool);
  if (tool.kind == ToolKind::kRoot) fail(ErrorCode::kInvalidArgument, "root tool used on a non-root event");
  if (e.mask && !e.mask->same_size(state.width(), state.height())) {
    fail(ErrorCode::kDimensionMismatch, "event mask does not match the canvas");
  }
  const json& p = e.payload;
  const std::string& name = e.tool;

  if (name == "lock") return apply_lock(state, e);
  if (name == "unlock") return apply_unlock(state, e);

  if (name == "pick_candidate") {
    const auto index = p.at("index").get<long long>();
    if (index < 0 || static_cast<std::size_t>(index) >= state.candidates.size()) {
      fail(ErrorCode::kInvalidArgument, "candidate index " + std::to_string(index) + " out of range");
    }
    return propagate(state, StageId::kViewpoint, *state.candidates[static_cast<std::size_t>(index)]);
  }
  if (name == "regenerate") {
    require_unlocked(state, StageId::kViewpoint);
    DecisionState next = state;
    next.candidates.clear();
    for (const auto& c : p.at("candidates")) {
      Raster sketch = payload::raster_from_json(c);
      if (!sketch.same_size(state.width(), state.height()) || sketch.channels() != 1) {
        fail(ErrorCode::kDimensionMismatch, "viewpoint candidate does not match the canvas");
      }
      next.candidates.emplace_back(std::move(sketch));
    }
    next.visited.insert(StageId::kViewpoint);
    return next;
  }

  if (name == "draw") {
    const Raster& ink = *state.composition;
    const auto stroke = payload::stroke_from_json(p, raster::Stroke::Mode::kDraw);
    return propagate(state, e.stage, within_event_mask(ink, raster::render_stroke(ink, stroke), e));
  }
  if (name == "erase") {
    const Raster& ink = *state.composition;
    if (p.contains("points")) {
      const auto stroke = payload::stroke_from_json(p, raster::Stroke::Mode::kErase);
      return propagate(state, e.stage, within_event_mask(ink, raster::render_stroke(ink, stroke), e));
    }
    return propagate(state, e.stage, raster::erase_region(ink, require_mask(e)));
  }
  if (name == "lasso") {
    const auto& m = p.at("transform");
    if (!m.is_array() || m.size() != 6) fail(ErrorCode::kInvalidArgument, "lasso transform needs 6 numbers");
    raster::AffineTransform t;
    for (std::size_t k = 0; k < 6; ++k) t.m[k] = m.at(k).get<double>();
    return propagate(state, e.stage, raster::lasso_transform(*state.composition, require_mask(e), t));
  }
  if (name == "mask_edit" || name == "ai_cleanup" || name == "ai_fill") {
    return apply_diff_payload(state, e.stage, p.at("diff"));
  }

  if (name == "palette_editor") {
    require_unlocked(state, StageId::kColor);
    DecisionState next = state;
    next.palette = payload::palette_from_json(p.at("palette"));
    next.visited.insert(StageId::kColor);
    return next;
  }
  if (name == "fill") {
    const PaletteColor color = resolve_color(state, p);
    return propagate(state, StageId::kColor,
                     raster::palette_fill(*state.composition, require_mask(e), color, *state.chroma));
  }
  if (name == "brush_fill") {
    const PaletteColor color = resolve_color(state, p);
    const auto stroke = payload::stroke_from_json(p, raster::Stroke::Mode::kDraw);
    Mask cover = raster::stroke_coverage(state.width(), state.height(), stroke);
    if (e.mask) cover = cover & *e.mask;
    Raster painted = *state.chroma;
    for (std::size_t i = 0; i < cover.pixel_count(); ++i) {
      if (!cover.test(i)) continue;
      for (int c = 0; c < 3; ++c) painted.data()[i * 3 + c] = color.rgb[c];
    }
    return propagate(state, StageId::kColor, painted);
  }

  if (name == "light_rig_editor" || name == "vibe_preset") {
    auto lights = payload::lights_from_json(p.at("lights"));
    DecisionState next;
    if (name == "vibe_preset") {
      next = apply_diff_payload(state, StageId::kLighting, p.at("diff"));
    } else {
      const Raster& shading = *state.shading;
      next = propagate(state, StageId::kLighting,
                       within_event_mask(shading, raster::shade_map(state.width(), state.height(), lights), e));
    }
    next.lights = std::move(lights);
    return next;
  }

  if (name == "preset_picker" || name == "apply") {
    return propagate(state, StageId::kStyle, payload::style_from_json(p, e.seed));
  }

  fail(ErrorCode::kUnknownTool, "no reducer for tool '" + name + "'");
}

}  // namespace creo
