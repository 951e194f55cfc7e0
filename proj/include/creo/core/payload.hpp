#pragma once

#include <vector>

#include <nlohmann/json.hpp>

#include "creo/core/event.hpp"
#include "creo/core/types.hpp"
#include "creo/raster/ops.hpp"

// JSON shapes of canonical event payloads and the state fields they carry.
namespace creo::payload {

using nlohmann::json;

// {"width","height","channels","f32"}: lossless float32 raster.
json raster_to_json(const Raster& r);
Raster raster_from_json(const json& j);

// Stroke points accept the canonical base64 string or a [[x,y],...] array.
json stroke_to_json(const raster::Stroke& s);
raster::Stroke stroke_from_json(const json& j, raster::Stroke::Mode mode);
std::vector<Point2> points_from_json(const json& j);

json light_to_json(const LightSpec& l);
LightSpec light_from_json(const json& j);
json lights_to_json(const std::vector<LightSpec>& lights);
std::vector<LightSpec> lights_from_json(const json& j);

json palette_color_to_json(const PaletteColor& c);
PaletteColor palette_color_from_json(const json& j);
json palette_to_json(const std::vector<PaletteColor>& palette);
std::vector<PaletteColor> palette_from_json(const json& j);

json style_to_json(const StyleSpec& s);
// Seed comes from the event, not the payload.
StyleSpec style_from_json(const json& j, std::uint64_t seed);

// {"mask": bits, "patch": raster}
json diff_to_json(const Mask& support, const Raster& patch);
std::pair<Mask, Raster> diff_from_json(const json& j);

json locks_to_json(const LockSet& locks);
json state_summary(const DecisionState& state);

}  // namespace creo::payload
