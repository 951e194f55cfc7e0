#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "creo/core/raster.hpp"
#include "creo/core/types.hpp"

namespace creo {

using EventId = std::uint64_t;

inline constexpr std::string_view kMainBranch = "main";
inline constexpr std::string_view kRootTool = "create_session";

// One append-only record in a session's edit DAG. The payload holds the
// canonical tool parameters, including any generated output, so replay never
// needs a backend.
struct EditEvent {
  EventId event_id = 0;
  std::optional<EventId> parent_id;
  std::string branch{kMainBranch};
  StageId stage = StageId::kViewpoint;
  std::string tool;
  nlohmann::json payload = nlohmann::json::object();
  std::optional<Mask> mask;
  std::uint64_t seed = 0;
  std::string wall_time;

  friend bool operator==(const EditEvent&, const EditEvent&) = default;
};

nlohmann::json mask_to_json(const Mask& m);
Mask mask_from_json(const nlohmann::json& j);

nlohmann::json event_to_json(const EditEvent& e);
EditEvent event_from_json(const nlohmann::json& j);

// One event per line, UTF-8, '\n' terminated.
std::string events_to_ndjson(std::span<const EditEvent> events);
std::vector<EditEvent> events_from_ndjson(std::string_view text);

enum class ToolKind { kRoot, kDirect, kBackend, kAdmin };

struct ToolInfo {
  std::string_view name;
  std::optional<StageId> stage;  // nullopt: valid in every stage
  ToolKind kind;
  bool listed = true;  // false: accepted by the API but not offered as a UI tool
};

std::span<const ToolInfo> tool_catalog();
// Tools a user may invoke in a stage, excluding the stage-agnostic lock tools.
std::vector<std::string> stage_toolset(StageId stage);
// Throws UnknownTool, or ToolStageMismatch when the tool belongs to another stage.
const ToolInfo& resolve_tool(StageId stage, std::string_view tool);

}  // namespace creo
