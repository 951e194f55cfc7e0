#pragma once

#include <set>
#include <string_view>
#include <variant>

#include "creo/core/raster.hpp"
#include "creo/core/types.hpp"

namespace creo::pipeline {

enum class Attribute { kInkGeometry, kChroma, kPalette, kShading, kLights, kGlobalStyle };
using AttributeSet = std::set<Attribute>;

inline constexpr std::array<Attribute, 6> kAllAttributes = {Attribute::kInkGeometry, Attribute::kChroma,
                                                            Attribute::kPalette,     Attribute::kShading,
                                                            Attribute::kLights,      Attribute::kGlobalStyle};

std::string_view attribute_name(Attribute a);
AttributeSet editable_attributes(StageId stage);

// preview = style( shading * chroma * (1 - ink) )
Raster compose_preview(const DecisionState& state);
// The same product without the style filter.
Raster compose_unstyled(const DecisionState& state);

// The layer a stage owns: ink/chroma/shading raster, or the style spec.
using StageLayer = std::variant<Raster, StyleSpec>;

StageLayer layer_for(const DecisionState& state, StageId stage);

// Replaces the stage's layer (region locks re-applied) and marks the stage
// visited. Every other layer is carried over untouched.
DecisionState propagate(const DecisionState& state, StageId edited_stage, const StageLayer& new_layer);

// `post` everywhere except the stage's locked pixels, which come from `pre`.
Raster enforce_locks(const Raster& pre, const Raster& post, const LockSet& locks, StageId stage);

// Locked pixels of a layer across every stage that writes it.
Mask layer_lock_mask(const LockSet& locks, LayerKind layer, int width, int height);
bool layer_fully_locked(const LockSet& locks, LayerKind layer);

struct ViolationReport {
  bool violated = false;
  double changed_fraction = 0.0;
  double max_delta = 0.0;
  Mask offending_mask;
};

inline constexpr double kDefaultViolationTau = 1.0 / 255.0;

// Compares pixels outside `scope` (scope = 0) and flags those whose largest
// channel delta exceeds tau.
ViolationReport detect_violation(const Raster& pre_preview, const Raster& post_preview, const Mask& scope,
                                 double tau = kDefaultViolationTau);

// Pixels at which two same-shaped rasters differ in any channel (bitwise).
Mask changed_pixels(const Raster& a, const Raster& b);

}  // namespace creo::pipeline
