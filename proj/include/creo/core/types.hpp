#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "creo/core/raster.hpp"

namespace creo {

enum class StageId { kViewpoint = 0, kComposition = 1, kColor = 2, kLighting = 3, kStyle = 4 };

inline constexpr std::array<StageId, 5> kAllStages = {StageId::kViewpoint, StageId::kComposition,
                                                      StageId::kColor, StageId::kLighting, StageId::kStyle};
// Canonical preview order; Viewpoint only selects the initial composition sketch.
inline constexpr std::array<StageId, 4> kPreviewStages = {StageId::kComposition, StageId::kColor,
                                                          StageId::kLighting, StageId::kStyle};

std::string_view stage_name(StageId stage);
// Accepts canonical names ("Composition") and lowercase ("composition").
StageId parse_stage(std::string_view name);
inline int stage_ordinal(StageId stage) { return static_cast<int>(stage); }

struct LightSpec {
  enum class Kind { kAmbient, kDirectional };
  Kind kind = Kind::kAmbient;
  double azimuth_deg = 0.0;    // [0, 360)
  double elevation_deg = 0.0;  // [0, 90]
  double intensity = 0.0;      // [0, 1]

  static LightSpec ambient(double intensity) { return {Kind::kAmbient, 0.0, 0.0, intensity}; }
  static LightSpec directional(double azimuth, double elevation, double intensity) {
    return {Kind::kDirectional, azimuth, elevation, intensity};
  }

  friend bool operator==(const LightSpec&, const LightSpec&) = default;
};

// Throws InvalidArgument when a field is out of range or an ambient light
// carries a direction.
void validate_light(const LightSpec& light);

struct PaletteColor {
  std::array<float, 3> rgb{1.0f, 1.0f, 1.0f};
  std::string label;

  friend bool operator==(const PaletteColor&, const PaletteColor&) = default;
};

void validate_palette_color(const PaletteColor& color);

struct StyleSpec {
  std::string preset = "identity";
  std::map<std::string, double> params;
  std::uint64_t seed = 0;

  bool is_identity() const { return preset == "identity"; }

  friend bool operator==(const StyleSpec&, const StyleSpec&) = default;
};

struct RegionLock {
  std::uint64_t id = 0;
  Mask mask;

  friend bool operator==(const RegionLock&, const RegionLock&) = default;
};

struct LockSet {
  // stage -> id of the lock that froze it
  std::map<StageId, std::uint64_t> stage_locks;
  std::map<StageId, std::vector<RegionLock>> region_locks;

  bool fully_locked(StageId stage) const { return stage_locks.contains(stage); }
  bool empty() const { return stage_locks.empty() && region_locks.empty(); }
  // Union of the stage's region locks; full canvas when the stage is fully locked.
  Mask locked_mask(StageId stage, int width, int height) const;
  bool has_lock(std::uint64_t id) const;

  friend bool operator==(const LockSet&, const LockSet&) = default;
};

// The layers a stage edits. Viewpoint and Composition both write the ink layer.
enum class LayerKind { kInk, kChroma, kShading, kStyle };
LayerKind layer_of(StageId stage);

// Immutable shared raster handle: snapshots share unchanged layers.
class SharedRaster {
 public:
  SharedRaster() = default;
  explicit SharedRaster(Raster r) : ptr_(std::make_shared<const Raster>(std::move(r))) {}

  const Raster& get() const { return *ptr_; }
  const Raster& operator*() const { return *ptr_; }
  const Raster* operator->() const { return ptr_.get(); }
  bool shares_with(const SharedRaster& other) const { return ptr_ == other.ptr_; }

  friend bool operator==(const SharedRaster& a, const SharedRaster& b) {
    return a.ptr_ == b.ptr_ || (a.ptr_ && b.ptr_ && *a.ptr_ == *b.ptr_);
  }

 private:
  std::shared_ptr<const Raster> ptr_;
};

struct DecisionState {
  SharedRaster composition;  // 1ch ink density, 0 = paper
  SharedRaster chroma;       // 3ch multiplicative colour, identity = 1
  SharedRaster shading;      // 1ch multiplicative light, identity = 1
  std::vector<LightSpec> lights;
  std::vector<PaletteColor> palette;
  StyleSpec style;
  LockSet locks;
  std::set<StageId> visited;
  // Viewpoint sketches offered at session start (or after regeneration).
  std::vector<SharedRaster> candidates;

  int width() const { return composition->width(); }
  int height() const { return composition->height(); }

  static DecisionState blank(int width, int height);

  friend bool operator==(const DecisionState&, const DecisionState&) = default;
};

// Checks that all layers share one canvas and have the expected channel counts.
void validate_state(const DecisionState& state);

}  // namespace creo
