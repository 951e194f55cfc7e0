#include "creo/core/payload.hpp"

#include "creo/core/codec.hpp"
#include "creo/core/error.hpp"

namespace creo::payload {

json raster_to_json(const Raster& r) {
  return json{{"width", r.width()}, {"height", r.height()}, {"channels", r.channels()}, {"f32", encode_raster_f32(r)}};
}

Raster raster_from_json(const json& j) {
  return decode_raster_f32(j.at("f32").get<std::string>(), j.at("width").get<int>(), j.at("height").get<int>(),
                           j.at("channels").get<int>());
}

std::vector<Point2> points_from_json(const json& j) {
  if (j.is_string()) return decode_points(j.get<std::string>());
  std::vector<Point2> pts;
  for (const auto& p : j) {
    pts.push_back({p.at(0).get<float>(), p.at(1).get<float>()});
  }
  return pts;
}

json stroke_to_json(const raster::Stroke& s) {
  json j{{"points", encode_points(s.points)}, {"radius", s.radius}};
  if (s.mode == raster::Stroke::Mode::kDraw) j["ink"] = s.ink;
  return j;
}

raster::Stroke stroke_from_json(const json& j, raster::Stroke::Mode mode) {
  raster::Stroke s;
  s.mode = mode;
  s.points = points_from_json(j.at("points"));
  s.radius = j.at("radius").get<float>();
  s.ink = j.value("ink", 1.0f);
  return s;
}

json light_to_json(const LightSpec& l) {
  return json{{"kind", l.kind == LightSpec::Kind::kAmbient ? "ambient" : "directional"},
              {"azimuth", l.azimuth_deg},
              {"elevation", l.elevation_deg},
              {"intensity", l.intensity}};
}

LightSpec light_from_json(const json& j) {
  LightSpec l;
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "ambient") {
    l.kind = LightSpec::Kind::kAmbient;
  } else if (kind == "directional") {
    l.kind = LightSpec::Kind::kDirectional;
  } else {
    fail(ErrorCode::kInvalidArgument, "unknown light kind '" + kind + "'");
  }
  l.azimuth_deg = j.value("azimuth", 0.0);
  l.elevation_deg = j.value("elevation", 0.0);
  l.intensity = j.at("intensity").get<double>();
  validate_light(l);
  return l;
}

json lights_to_json(const std::vector<LightSpec>& lights) {
  json arr = json::array();
  for (const auto& l : lights) arr.push_back(light_to_json(l));
  return arr;
}

std::vector<LightSpec> lights_from_json(const json& j) {
  std::vector<LightSpec> out;
  for (const auto& l : j) out.push_back(light_from_json(l));
  return out;
}

json palette_color_to_json(const PaletteColor& c) {
  return json{{"rgb", {c.rgb[0], c.rgb[1], c.rgb[2]}}, {"label", c.label}};
}

PaletteColor palette_color_from_json(const json& j) {
  PaletteColor c;
  const auto& rgb = j.at("rgb");
  if (!rgb.is_array() || rgb.size() != 3) fail(ErrorCode::kInvalidArgument, "rgb must have three components");
  for (int k = 0; k < 3; ++k) c.rgb[k] = rgb.at(k).get<float>();
  c.label = j.value("label", std::string{});
  validate_palette_color(c);
  return c;
}

json palette_to_json(const std::vector<PaletteColor>& palette) {
  json arr = json::array();
  for (const auto& c : palette) arr.push_back(palette_color_to_json(c));
  return arr;
}

std::vector<PaletteColor> palette_from_json(const json& j) {
  std::vector<PaletteColor> out;
  for (const auto& c : j) out.push_back(palette_color_from_json(c));
  return out;
}

json style_to_json(const StyleSpec& s) {
  json params = json::object();
  for (const auto& [k, v] : s.params) params[k] = v;
  return json{{"preset", s.preset}, {"params", params}, {"seed", s.seed}};
}

StyleSpec style_from_json(const json& j, std::uint64_t seed) {
  StyleSpec s;
  s.preset = j.at("preset").get<std::string>();
  if (j.contains("params")) {
    for (const auto& [k, v] : j.at("params").items()) s.params[k] = v.get<double>();
  }
  s.seed = seed;
  return s;
}

json diff_to_json(const Mask& support, const Raster& patch) {
  return json{{"mask", mask_to_json(support)}, {"patch", raster_to_json(patch)}};
}

std::pair<Mask, Raster> diff_from_json(const json& j) {
  return {mask_from_json(j.at("mask")), raster_from_json(j.at("patch"))};
}

json locks_to_json(const LockSet& locks) {
  json arr = json::array();
  for (const auto& [stage, id] : locks.stage_locks) {
    arr.push_back(json{{"lock_id", id}, {"stage", std::string(stage_name(stage))}, {"scope", "stage"}});
  }
  for (const auto& [stage, regions] : locks.region_locks) {
    for (const auto& r : regions) {
      arr.push_back(json{{"lock_id", r.id},
                         {"stage", std::string(stage_name(stage))},
                         {"scope", "region"},
                         {"mask", mask_to_json(r.mask)}});
    }
  }
  return arr;
}

json state_summary(const DecisionState& state) {
  json visited = json::array();
  for (StageId s : state.visited) visited.push_back(std::string(stage_name(s)));
  return json{{"width", state.width()},
              {"height", state.height()},
              {"visited", visited},
              {"palette", palette_to_json(state.palette)},
              {"lights", lights_to_json(state.lights)},
              {"style", style_to_json(state.style)},
              {"locks", locks_to_json(state.locks)},
              {"candidates", state.candidates.size()}};
}

}  // namespace creo::payload
