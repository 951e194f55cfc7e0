#include "creo/pipeline/stage_pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "creo/core/error.hpp"
#include "creo/raster/ops.hpp"

namespace creo::pipeline {

namespace {

bool bits_equal(float a, float b) { return std::memcmp(&a, &b, sizeof(float)) == 0; }

const Raster& expect_raster(const StageLayer& layer, StageId stage) {
  if (const auto* r = std::get_if<Raster>(&layer)) return *r;
  fail(ErrorCode::kInvalidArgument, std::string(stage_name(stage)) + " expects a raster layer");
}

}  // namespace

std::string_view attribute_name(Attribute a) {
  switch (a) {
    case Attribute::kInkGeometry: return "ink_geometry";
    case Attribute::kChroma: return "chroma";
    case Attribute::kPalette: return "palette";
    case Attribute::kShading: return "shading";
    case Attribute::kLights: return "lights";
    case Attribute::kGlobalStyle: return "global_style";
  }
  return "unknown";
}

AttributeSet editable_attributes(StageId stage) {
  switch (stage) {
    case StageId::kViewpoint:
    case StageId::kComposition: return {Attribute::kInkGeometry};
    case StageId::kColor: return {Attribute::kChroma, Attribute::kPalette};
    case StageId::kLighting: return {Attribute::kShading, Attribute::kLights};
    case StageId::kStyle: return {Attribute::kGlobalStyle};
  }
  return {};
}

Raster compose_unstyled(const DecisionState& state) {
  validate_state(state);
  const Raster& ink = *state.composition;
  const Raster& chroma = *state.chroma;
  const Raster& shading = *state.shading;
  Raster out(ink.width(), ink.height(), 3);
  auto dst = out.data();
  auto s = ink.data();
  auto ch = chroma.data();
  auto sh = shading.data();
  for (std::size_t i = 0; i < ink.pixel_count(); ++i) {
    const float base = 1.0f - s[i];
    for (std::size_t c = 0; c < 3; ++c) {
      const float colored = ch[i * 3 + c] * base;
      dst[i * 3 + c] = colored * sh[i];
    }
  }
  return out;
}

Raster compose_preview(const DecisionState& state) {
  return raster::apply_style(compose_unstyled(state), state.style);
}

StageLayer layer_for(const DecisionState& state, StageId stage) {
  switch (layer_of(stage)) {
    case LayerKind::kInk: return *state.composition;
    case LayerKind::kChroma: return *state.chroma;
    case LayerKind::kShading: return *state.shading;
    case LayerKind::kStyle: return state.style;
  }
  return state.style;
}

Mask layer_lock_mask(const LockSet& locks, LayerKind layer, int width, int height) {
  Mask out(width, height);
  for (StageId s : kAllStages) {
    if (layer_of(s) == layer) out = out | locks.locked_mask(s, width, height);
  }
  return out;
}

bool layer_fully_locked(const LockSet& locks, LayerKind layer) {
  return std::any_of(kAllStages.begin(), kAllStages.end(),
                     [&](StageId s) { return layer_of(s) == layer && locks.fully_locked(s); });
}

Raster enforce_locks(const Raster& pre, const Raster& post, const LockSet& locks, StageId stage) {
  require_same_shape(pre, post, "enforce_locks");
  if (locks.fully_locked(stage)) return pre;
  auto it = locks.region_locks.find(stage);
  if (it == locks.region_locks.end() || it->second.empty()) return post;
  const Mask locked = locks.locked_mask(stage, pre.width(), pre.height());
  return raster::masked_composite(post, pre, locked);
}

DecisionState propagate(const DecisionState& state, StageId edited_stage, const StageLayer& new_layer) {
  validate_state(state);
  const LayerKind kind = layer_of(edited_stage);
  if (layer_fully_locked(state.locks, kind)) {
    fail(ErrorCode::kStageLocked, std::string(stage_name(edited_stage)) + " is locked");
  }

  DecisionState next = state;
  next.visited.insert(edited_stage);
  if (kind == LayerKind::kStyle) {
    const auto* style = std::get_if<StyleSpec>(&new_layer);
    if (style == nullptr) fail(ErrorCode::kInvalidArgument, "Style expects a StyleSpec layer");
    if (!raster::is_registered_preset(style->preset)) {
      fail(ErrorCode::kUnknownPreset, "unknown style preset '" + style->preset + "'");
    }
    next.style = *style;
    return next;
  }

  const Raster& proposed = expect_raster(new_layer, edited_stage);
  const SharedRaster& current = kind == LayerKind::kInk      ? state.composition
                                : kind == LayerKind::kChroma ? state.chroma
                                                             : state.shading;
  require_same_shape(*current, proposed, "propagate");
  if (!samples_normalized(proposed)) {
    fail(ErrorCode::kInvalidArgument, "layer samples must be finite and within [0,1]");
  }

  Raster merged = proposed;
  for (StageId owner : kAllStages) {
    if (layer_of(owner) == kind) merged = enforce_locks(*current, merged, state.locks, owner);
  }
  // Keep sharing the old buffer when nothing changed.
  SharedRaster updated = merged == *current ? current : SharedRaster(std::move(merged));
  switch (kind) {
    case LayerKind::kInk: next.composition = updated; break;
    case LayerKind::kChroma: next.chroma = updated; break;
    case LayerKind::kShading: next.shading = updated; break;
    case LayerKind::kStyle: break;
  }
  return next;
}

Mask changed_pixels(const Raster& a, const Raster& b) {
  require_same_shape(a, b, "changed_pixels");
  Mask out(a.width(), a.height());
  const int ch = a.channels();
  for (std::size_t i = 0; i < a.pixel_count(); ++i) {
    for (int c = 0; c < ch; ++c) {
      if (!bits_equal(a.data()[i * ch + c], b.data()[i * ch + c])) {
        out.set_index(i, true);
        break;
      }
    }
  }
  return out;
}

ViolationReport detect_violation(const Raster& pre_preview, const Raster& post_preview, const Mask& scope,
                                 double tau) {
  require_same_shape(pre_preview, post_preview, "detect_violation");
  require_mask_fits(scope, pre_preview, "detect_violation");
  if (!(tau >= 0.0)) fail(ErrorCode::kInvalidArgument, "tau must be >= 0");

  ViolationReport report;
  report.offending_mask = Mask(pre_preview.width(), pre_preview.height());
  const int ch = pre_preview.channels();
  std::size_t examined = 0;
  std::size_t offending = 0;
  for (std::size_t i = 0; i < scope.pixel_count(); ++i) {
    if (scope.test(i)) continue;
    ++examined;
    double worst = 0.0;
    for (int c = 0; c < ch; ++c) {
      const double d = std::abs(static_cast<double>(post_preview.data()[i * ch + c]) -
                                static_cast<double>(pre_preview.data()[i * ch + c]));
      worst = std::max(worst, d);
    }
    report.max_delta = std::max(report.max_delta, worst);
    if (worst > tau) {
      ++offending;
      report.offending_mask.set_index(i, true);
    }
  }
  report.changed_fraction = examined == 0 ? 0.0 : static_cast<double>(offending) / static_cast<double>(examined);
  report.violated = offending > 0;
  return report;
}

}  // namespace creo::pipeline
