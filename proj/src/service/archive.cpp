#include "creo/core/codec.hpp"
#include "creo/core/error.hpp"
#include "creo/core/payload.hpp"
#include "creo/service/service.hpp"

namespace creo::service {

using nlohmann::json;

namespace {

constexpr const char* kArchiveFormat = "creo-archive/1";

std::string_view journal_kind_name(JournalEntry::Kind k) {
  switch (k) {
    case JournalEntry::Kind::kEdit:
      return "edit";
    case JournalEntry::Kind::kRevert:
      return "revert";
    case JournalEntry::Kind::kBranch:
      return "branch";
  }
  return "edit";
}

JournalEntry::Kind parse_journal_kind(const std::string& s) {
  if (s == "edit") return JournalEntry::Kind::kEdit;
  if (s == "revert") return JournalEntry::Kind::kRevert;
  if (s == "branch") return JournalEntry::Kind::kBranch;
  fail(ErrorCode::kInvalidArgument, "unknown journal kind '" + s + "'");
}

std::string action_type_for(const EditEvent& e) {
  const ToolInfo& t = resolve_tool(e.stage, e.tool);
  switch (t.kind) {
    case ToolKind::kRoot:
    case ToolKind::kBackend:
      return "generate";
    case ToolKind::kAdmin:
      return "refine";
    case ToolKind::kDirect:
      break;
  }
  return e.tool == "pick_candidate" ? "evaluate" : "construct";
}

std::string decode_file(const json& files, const std::string& name) {
  if (!files.contains(name)) fail(ErrorCode::kMissingField, "archive is missing " + name);
  const auto bytes = base64_decode(files.at(name).get<std::string>());
  return {bytes.begin(), bytes.end()};
}

}  // namespace

json meta_json(const Session& session) {
  json journal = json::array();
  for (const auto& j : session.journal()) {
    journal.push_back(json{{"kind", journal_kind_name(j.kind)},
                           {"event_id", j.event_id},
                           {"branch", j.branch},
                           {"wall_time", j.wall_time},
                           {"violated", j.violated}});
  }
  return json{{"session_id", session.session_id()},
              {"entry_mode", entry_mode_name(session.entry_mode())},
              {"heads", session.heads()},
              {"journal", std::move(journal)}};
}

Session apply_meta(const Session& session, const json& meta) {
  std::map<std::string, EventId> heads = meta.at("heads").get<std::map<std::string, EventId>>();
  std::vector<JournalEntry> journal;
  for (const auto& j : meta.at("journal")) {
    journal.push_back(JournalEntry{parse_journal_kind(j.at("kind").get<std::string>()), j.at("event_id").get<EventId>(),
                                   j.at("branch").get<std::string>(), j.at("wall_time").get<std::string>(),
                                   j.value("violated", false)});
  }
  return session.with_history(std::move(heads), std::move(journal));
}

std::string action_log_ndjson(const Session& session, const std::string& condition) {
  std::string out;
  std::int64_t index = 0;
  std::int64_t iteration = 1;
  bool last_edit_violated = false;
  for (const auto& j : session.journal()) {
    if (j.kind == JournalEntry::Kind::kBranch) {
      ++iteration;
      continue;
    }
    json r;
    r["session_id"] = session.session_id();
    r["condition"] = condition;
    r["index"] = ++index;
    r["intent"] = nullptr;
    r["agency"] = nullptr;
    r["direction_change"] = false;
    r["annotation"] = "mechanical";
    r["event_id"] = j.event_id;
    r["branch"] = j.branch;
    r["wall_time"] = j.wall_time;
    const EditEvent& e = session.event(j.event_id);
    if (j.kind == JournalEntry::Kind::kRevert) {
      ++iteration;
      r["action_type"] = last_edit_violated ? "repair" : "refine";
      r["invariant_violation"] = false;
      r["tool"] = "revert";
      r["stage"] = std::string(stage_name(e.stage));
      last_edit_violated = false;
    } else {
      r["action_type"] = action_type_for(e);
      r["invariant_violation"] = j.violated;
      r["tool"] = e.tool;
      r["stage"] = std::string(stage_name(e.stage));
      last_edit_violated = j.violated;
    }
    r["iteration_id"] = iteration;
    out += r.dump();
    out += '\n';
  }
  return out;
}

std::string build_archive(const Session& session, const std::string& branch) {
  const EventId head = session.head(branch);
  const DecisionState state = snapshot_at(session, head);
  const auto events = session.events();

  json files = json::object();
  auto put = [&files](const std::string& name, std::string_view bytes) { files[name] = base64_encode(bytes); };
  put("events.ndjson", events_to_ndjson(events));
  put("meta.json", meta_json(session).dump(2));
  put("layers/Composition.png", encode_png(*state.composition));
  put("layers/Color.png", encode_png(*state.chroma));
  put("layers/Lighting.png", encode_png(*state.shading));
  put("layers/Style.json", payload::style_to_json(state.style).dump(2));
  put("preview.png", encode_png(pipeline::compose_preview(state)));
  put("actions.ndjson", action_log_ndjson(session));

  json archive{{"format", kArchiveFormat},
               {"session_id", session.session_id()},
               {"branch", branch},
               {"head", head},
               {"files", std::move(files)}};
  return archive.dump();
}

Session read_archive(const std::string& archive) {
  json a;
  try {
    a = json::parse(archive);
  } catch (const json::parse_error& ex) {
    fail(ErrorCode::kInvalidArgument, std::string("archive is not JSON: ") + ex.what());
  }
  if (!a.is_object() || a.value("format", "") != kArchiveFormat) {
    fail(ErrorCode::kInvalidArgument, "not a creo archive");
  }
  const json& files = a.at("files");
  const auto events = events_from_ndjson(decode_file(files, "events.ndjson"));
  const json meta = json::parse(decode_file(files, "meta.json"));
  Session s = session_from_events(a.at("session_id").get<std::string>(), events);
  return apply_meta(s, meta);
}

Raster render_event_log(std::string_view ndjson, std::optional<EventId> at) {
  const auto events = events_from_ndjson(ndjson);
  if (events.empty()) fail(ErrorCode::kInvalidArgument, "event log is empty");
  const Session s = session_from_events("render", events);
  return pipeline::compose_preview(snapshot_at(s, at.value_or(events.back().event_id)));
}

}  // namespace creo::service
