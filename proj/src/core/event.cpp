#include "creo/core/event.hpp"

#include <array>
#include <sstream>

#include "creo/core/codec.hpp"
#include "creo/core/error.hpp"

namespace creo {

using nlohmann::json;

json mask_to_json(const Mask& m) {
  return json{{"width", m.width()}, {"height", m.height()}, {"bits", encode_mask_bits(m)}};
}

Mask mask_from_json(const json& j) {
  if (!j.is_object()) fail(ErrorCode::kInvalidArgument, "mask must be an object");
  if (j.contains("png")) {
    // Clients may upload masks as base64 PNG; width/height are implied.
    const auto bytes = base64_decode(j.at("png").get<std::string>());
    return decode_mask_png(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
  }
  const int w = j.at("width").get<int>();
  const int h = j.at("height").get<int>();
  if (j.contains("bits")) return decode_mask_bits(j.at("bits").get<std::string>(), w, h);
  fail(ErrorCode::kInvalidArgument, "mask object needs a 'bits' or 'png' field");
}

json event_to_json(const EditEvent& e) {
  json j;
  j["event_id"] = e.event_id;
  j["parent_id"] = e.parent_id ? json(*e.parent_id) : json(nullptr);
  j["branch"] = e.branch;
  j["stage"] = std::string(stage_name(e.stage));
  j["tool"] = e.tool;
  j["payload"] = e.payload;
  j["mask"] = e.mask ? mask_to_json(*e.mask) : json(nullptr);
  j["seed"] = e.seed;
  j["wall_time"] = e.wall_time;
  return j;
}

EditEvent event_from_json(const json& j) {
  EditEvent e;
  try {
    e.event_id = j.at("event_id").get<EventId>();
    if (!j.at("parent_id").is_null()) e.parent_id = j.at("parent_id").get<EventId>();
    e.branch = j.at("branch").get<std::string>();
    e.stage = parse_stage(j.at("stage").get<std::string>());
    e.tool = j.at("tool").get<std::string>();
    e.payload = j.at("payload");
    if (!j.at("mask").is_null()) e.mask = mask_from_json(j.at("mask"));
    e.seed = j.at("seed").get<std::uint64_t>();
    e.wall_time = j.at("wall_time").get<std::string>();
  } catch (const json::exception& ex) {
    fail(ErrorCode::kInvalidArgument, std::string("malformed event: ") + ex.what());
  }
  return e;
}

std::string events_to_ndjson(std::span<const EditEvent> events) {
  std::string out;
  for (const auto& e : events) {
    out += event_to_json(e).dump();
    out += '\n';
  }
  return out;
}

std::vector<EditEvent> events_from_ndjson(std::string_view text) {
  std::vector<EditEvent> events;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& ex) {
      fail(ErrorCode::kInvalidArgument, "events line " + std::to_string(line_no) + ": " + ex.what());
    }
    events.push_back(event_from_json(j));
  }
  return events;
}

namespace {

constexpr std::array<ToolInfo, 18> kTools = {{
    {kRootTool, std::nullopt, ToolKind::kRoot},
    {"pick_candidate", StageId::kViewpoint, ToolKind::kDirect},
    {"regenerate", StageId::kViewpoint, ToolKind::kBackend},
    {"draw", StageId::kComposition, ToolKind::kDirect},
    {"erase", StageId::kComposition, ToolKind::kDirect},
    {"lasso", StageId::kComposition, ToolKind::kDirect},
    {"mask_edit", StageId::kComposition, ToolKind::kBackend},
    {"ai_cleanup", StageId::kComposition, ToolKind::kBackend},
    {"palette_editor", StageId::kColor, ToolKind::kDirect},
    {"brush_fill", StageId::kColor, ToolKind::kDirect},
    {"fill", StageId::kColor, ToolKind::kDirect, false},
    {"ai_fill", StageId::kColor, ToolKind::kBackend},
    {"light_rig_editor", StageId::kLighting, ToolKind::kDirect},
    {"vibe_preset", StageId::kLighting, ToolKind::kBackend},
    {"preset_picker", StageId::kStyle, ToolKind::kDirect},
    {"apply", StageId::kStyle, ToolKind::kDirect},
    {"lock", std::nullopt, ToolKind::kAdmin},
    {"unlock", std::nullopt, ToolKind::kAdmin},
}};

}  // namespace

std::span<const ToolInfo> tool_catalog() { return kTools; }

std::vector<std::string> stage_toolset(StageId stage) {
  std::vector<std::string> out;
  for (const auto& t : kTools) {
    if (t.stage == stage && t.listed) out.emplace_back(t.name);
  }
  return out;
}

const ToolInfo& resolve_tool(StageId stage, std::string_view tool) {
  for (const auto& t : kTools) {
    if (t.name != tool) continue;
    if (t.stage && *t.stage != stage) {
      fail(ErrorCode::kToolStageMismatch, "tool '" + std::string(tool) + "' belongs to " +
                                              std::string(stage_name(*t.stage)) + ", not " +
                                              std::string(stage_name(stage)));
    }
    return t;
  }
  fail(ErrorCode::kUnknownTool, "unknown tool '" + std::string(tool) + "'");
}

}  // namespace creo
