#include "creo/service/service.hpp"

#include <fmt/format.h>

#include <algorithm>

#include "creo/core/codec.hpp"
#include "creo/core/error.hpp"
#include "creo/core/hash.hpp"
#include "creo/core/payload.hpp"
#include "creo/core/reducer.hpp"
#include "creo/raster/ops.hpp"

namespace creo::service {

using nlohmann::json;
namespace fs = std::filesystem;

struct Service::Entry {
  std::mutex write_mu;  // single writer per session
  mutable std::mutex ptr_mu;
  std::shared_ptr<const Session> session;
  fs::path dir;

  std::shared_ptr<const Session> load() const {
    std::lock_guard lock(ptr_mu);
    return session;
  }
  void store(std::shared_ptr<const Session> next) {
    std::lock_guard lock(ptr_mu);
    session = std::move(next);
  }
};

namespace {

void write_atomic(const fs::path& path, std::string_view bytes) {
  const fs::path tmp = path.string() + ".tmp";
  write_file(tmp, bytes);
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) fail(ErrorCode::kIo, "rename " + tmp.string() + ": " + ec.message());
}

void persist(const fs::path& dir, const Session& session) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) fail(ErrorCode::kIo, "create " + dir.string() + ": " + ec.message());
  const auto events = session.events();
  write_atomic(dir / "events.ndjson", events_to_ndjson(events));
  write_atomic(dir / "meta.json", meta_json(session).dump(2));
}

bool path_has_pick(const Session& s, EventId head) {
  for (EventId id : s.path_to(head)) {
    if (s.event(id).tool == "pick_candidate") return true;
  }
  return false;
}

std::optional<Mask> optional_mask(const json& p, const char* key) {
  if (!p.contains(key) || p.at(key).is_null()) return std::nullopt;
  return mask_from_json(p.at(key));
}

const Raster& layer_raster(const DecisionState& s, StageId stage) {
  switch (layer_of(stage)) {
    case LayerKind::kInk:
      return *s.composition;
    case LayerKind::kChroma:
      return *s.chroma;
    case LayerKind::kShading:
      return *s.shading;
    case LayerKind::kStyle:
      break;
  }
  fail(ErrorCode::kInvalidArgument, "style has no raster layer");
}

}  // namespace

bool valid_session_id(std::string_view id) {
  if (id.empty() || id.size() > 64) return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' || c == '_';
  });
}

Service::Service(ServiceConfig config, std::unique_ptr<gen::Backend> backend, Clock clock, IdGenerator ids)
    : config_(std::move(config)), backend_(std::move(backend)), clock_(std::move(clock)), ids_(std::move(ids)) {
  config_.validate();
  if (!backend_) backend_ = gen::make_backend(config_.backend, config_.backend_url);
  if (!clock_) clock_ = utc_now;
  if (!ids_) ids_ = random_session_id;
  if (!config_.data_dir.empty()) load_all();
}

Service::~Service() = default;

void Service::load_all() {
  const fs::path root = config_.data_dir / "sessions";
  std::error_code ec;
  if (!fs::is_directory(root, ec)) return;
  for (const auto& dirent : fs::directory_iterator(root)) {
    if (!dirent.is_directory()) continue;
    const std::string id = dirent.path().filename().string();
    try {
      const auto events = events_from_ndjson(read_file(dirent.path() / "events.ndjson"));
      Session s = session_from_events(id, events);
      s = apply_meta(s, json::parse(read_file(dirent.path() / "meta.json")));
      auto e = std::make_shared<Entry>();
      e->session = std::make_shared<const Session>(std::move(s));
      e->dir = dirent.path();
      sessions_.emplace(id, std::move(e));
    } catch (const std::exception& ex) {
      fmt::print(stderr, "creo: skipping session {}: {}\n", id, ex.what());
    }
  }
}

std::shared_ptr<Service::Entry> Service::entry(const std::string& session_id) const {
  std::shared_lock lock(sessions_mu_);
  auto it = sessions_.find(session_id);
  if (it == sessions_.end()) fail(ErrorCode::kUnknownSession, "no session '" + session_id + "'");
  return it->second;
}

std::shared_ptr<const Session> Service::current(const std::string& session_id) const {
  return entry(session_id)->load();
}

void Service::commit(Entry& e, std::shared_ptr<const Session> next) {
  if (!e.dir.empty()) persist(e.dir, *next);
  e.store(std::move(next));
}

std::string Service::create_session(const CreateSessionRequest& request) {
  json p;
  p["mode"] = std::string(entry_mode_name(request.mode));
  std::shared_ptr<const Raster> source;
  int w = 0;
  int h = 0;
  if (request.mode == EntryMode::kPromptFirst) {
    if (!request.prompt || request.prompt->empty()) fail(ErrorCode::kMissingPrompt, "prompt_first needs a prompt");
    w = h = request.canvas_size.value_or(config_.canvas_size);
    if (w < 1) fail(ErrorCode::kInvalidArgument, "canvas_size must be >= 1");
    const auto sketches =
        gen::generate_viewpoints(*backend_, *request.prompt, request.n_viewpoints, request.seed, w, h);
    p["prompt"] = *request.prompt;
    p["n_viewpoints"] = request.n_viewpoints;
    json cands = json::array();
    for (const auto& s : sketches) cands.push_back(payload::raster_to_json(s));
    p["candidates"] = std::move(cands);
  } else {
    if (!request.image) fail(ErrorCode::kMissingImage, "image_first needs an image");
    if (request.image->channels() != 3) fail(ErrorCode::kChannelMismatch, "source image must have 3 channels");
    if (!samples_normalized(*request.image)) fail(ErrorCode::kInvalidArgument, "source image samples outside [0,1]");
    w = request.image->width();
    h = request.image->height();
    source = std::make_shared<const Raster>(*request.image);
    if (request.prompt) p["prompt"] = *request.prompt;
    p["source"] = payload::raster_to_json(*request.image);
  }
  p["width"] = w;
  p["height"] = h;

  EditEvent root;
  root.event_id = 1;
  root.stage = StageId::kViewpoint;
  root.tool = std::string(kRootTool);
  root.payload = std::move(p);
  root.seed = request.seed;
  root.wall_time = clock_();

  std::unique_lock lock(sessions_mu_);
  std::string id = ids_();
  for (int attempt = 0; sessions_.contains(id) && attempt < 16; ++attempt) id = ids_();
  if (sessions_.contains(id)) fail(ErrorCode::kInvalidArgument, "session id generator keeps colliding");
  if (!valid_session_id(id)) fail(ErrorCode::kInvalidArgument, "generated session id '" + id + "' is not path-safe");

  Session session(id, request.mode, request.prompt, source, w, h);
  session = append_event(session, std::move(root));
  auto e = std::make_shared<Entry>();
  if (!config_.data_dir.empty()) e->dir = config_.data_dir / "sessions" / id;
  commit(*e, std::make_shared<const Session>(std::move(session)));
  sessions_.emplace(id, std::move(e));
  return id;
}

EditResult Service::submit_edit(const std::string& session_id, const EditRequest& request) {
  auto e = entry(session_id);
  std::lock_guard write(e->write_mu);
  const auto cur = e->load();

  const ToolInfo& tool = resolve_tool(request.stage, request.tool);
  if (tool.kind == ToolKind::kRoot) fail(ErrorCode::kInvalidArgument, "sessions are created through POST /sessions");
  if (!cur->has_branch(request.branch)) fail(ErrorCode::kUnknownBranch, "no branch '" + request.branch + "'");
  if (!request.payload.is_object()) fail(ErrorCode::kInvalidArgument, "payload must be an object");

  Session work = *cur;
  std::string branch = request.branch;
  const EventId parent = work.head(branch);
  const std::string now = clock_();

  // Picking a different viewpoint after one was already chosen keeps the old
  // line of work intact on its branch and continues on a fresh one.
  if (request.tool == "pick_candidate" && path_has_pick(work, parent)) {
    std::string name = fmt::format("viewpoint-{}", work.next_event_id());
    for (int k = 2; work.has_branch(name); ++k) name = fmt::format("viewpoint-{}-{}", work.next_event_id(), k);
    work = branch_from(work, parent, name, now);
    branch = name;
  }

  const DecisionState pre = snapshot_at(work, parent);
  EditEvent ev;
  ev.event_id = work.next_event_id();
  ev.parent_id = parent;
  ev.branch = branch;
  ev.stage = request.stage;
  ev.tool = request.tool;
  ev.mask = request.mask;
  ev.seed = request.seed.value_or(hash_combine(fnv1a(session_id), ev.event_id));
  ev.wall_time = now;
  ev.payload = request.payload;

  std::size_t spillover = 0;
  if (tool.kind == ToolKind::kBackend) {
    const json& in = request.payload;
    if (request.tool == "regenerate") {
      std::string prompt = in.value("prompt", work.prompt().value_or(""));
      if (prompt.empty()) fail(ErrorCode::kMissingPrompt, "regenerate needs a prompt");
      const int count = in.value("count", gen::kDefaultViewpointCount);
      const auto sketches =
          gen::generate_viewpoints(*backend_, prompt, count, ev.seed, work.canvas_width(), work.canvas_height());
      json cands = json::array();
      for (const auto& s : sketches) cands.push_back(payload::raster_to_json(s));
      ev.payload = json{{"prompt", prompt}, {"count", count}, {"candidates", std::move(cands)}};
    } else {
      gen::GenerationRequest g;
      g.state = pre;
      g.stage = request.stage;
      g.mask = request.mask;
      g.seed = ev.seed;
      g.scribble = optional_mask(in, "scribble");
      if (request.tool == "ai_cleanup") {
        g.instruction = in.value("instruction", "cleanup");
      } else if (request.tool == "ai_fill" && in.contains("color")) {
        g.instruction = fmt::format("fill:{}", in.at("color").get<long long>());
      } else if (request.tool == "vibe_preset" && in.contains("preset")) {
        g.instruction = "vibe:" + in.at("preset").get<std::string>();
      } else {
        g.instruction = in.value("instruction", "");
      }
      const gen::Diff diff = gen::stage_edit(g, *backend_);
      spillover = diff.spillover;
      json out{{"instruction", g.instruction}, {"diff", payload::diff_to_json(diff.mask, diff.patch)}};
      if (spillover > 0) out["spillover"] = spillover;
      if (g.scribble) out["scribble"] = mask_to_json(*g.scribble);
      if (request.tool == "vibe_preset") {
        std::vector<LightSpec> lights = pre.lights;
        if (g.instruction.rfind("vibe:", 0) == 0) {
          try {
            lights = gen::light_rig_preset(g.instruction.substr(5));
          } catch (const Error&) {
            // Remote-only vibe names: the light list stays as it was.
          }
        }
        out["lights"] = payload::lights_to_json(lights);
      }
      ev.payload = std::move(out);
    }
  }

  const DecisionState post = apply_event(pre, ev);
  const Raster pre_preview = pipeline::compose_preview(pre);
  Raster post_preview = pipeline::compose_preview(post);

  const int w = pre.width();
  const int h = pre.height();
  Mask scope(w, h);
  if (layer_of(request.stage) == LayerKind::kStyle) {
    scope = Mask::full(w, h);
  } else {
    if (ev.mask) scope = *ev.mask;
    scope = scope | pipeline::changed_pixels(layer_raster(pre, request.stage), layer_raster(post, request.stage));
    // The style filter spreads every in-scope change over its kernel.
    scope = raster::dilate(scope, raster::style_footprint(post.style.preset));
  }
  const auto violation = pipeline::detect_violation(pre_preview, post_preview, scope, config_.violation_tau);
  if (violation.violated || spillover > 0) {
    fmt::print(stderr, "creo: session {} event {} ({}): violated={} changed_fraction={:.6f} spillover={}\n", session_id,
               ev.event_id, ev.tool, violation.violated, violation.changed_fraction, spillover);
  }

  const EventId id = ev.event_id;
  auto next = std::make_shared<const Session>(append_event(work, std::move(ev), violation.violated));
  commit(*e, std::move(next));
  return EditResult{id, branch, std::move(post_preview), violation, spillover};
}

EventId Service::add_lock(const std::string& session_id, const std::string& branch, StageId stage,
                          const std::optional<Mask>& mask) {
  EditRequest r;
  r.branch = branch;
  r.stage = stage;
  r.tool = "lock";
  r.mask = mask;
  return submit_edit(session_id, r).event_id;
}

EventId Service::remove_lock(const std::string& session_id, const std::string& branch, std::uint64_t lock_id) {
  const DecisionState s = state(session_id, branch, std::nullopt);
  std::optional<StageId> stage;
  for (const auto& [st, id] : s.locks.stage_locks) {
    if (id == lock_id) stage = st;
  }
  for (const auto& [st, regions] : s.locks.region_locks) {
    for (const auto& r : regions) {
      if (r.id == lock_id) stage = st;
    }
  }
  if (!stage) fail(ErrorCode::kUnknownLock, "no lock with id " + std::to_string(lock_id));
  EditRequest r;
  r.branch = branch;
  r.stage = *stage;
  r.tool = "unlock";
  r.payload = json{{"lock_id", lock_id}};
  return submit_edit(session_id, r).event_id;
}

void Service::create_branch(const std::string& session_id, EventId from_event, const std::string& name) {
  auto e = entry(session_id);
  std::lock_guard write(e->write_mu);
  auto next = std::make_shared<const Session>(branch_from(*e->load(), from_event, name, clock_()));
  commit(*e, std::move(next));
}

void Service::revert(const std::string& session_id, EventId event_id, const std::string& branch) {
  auto e = entry(session_id);
  std::lock_guard write(e->write_mu);
  const auto cur = e->load();
  Session next = revert_to(*cur, event_id, branch, clock_());
  if (next.journal().size() == cur->journal().size()) return;
  commit(*e, std::make_shared<const Session>(std::move(next)));
}

Session Service::session(const std::string& session_id) const { return *current(session_id); }

std::vector<std::string> Service::session_ids() const {
  std::shared_lock lock(sessions_mu_);
  std::vector<std::string> out;
  for (const auto& [id, _] : sessions_) out.push_back(id);
  return out;
}

std::string Service::active_branch(const std::string& session_id) const {
  const auto s = current(session_id);
  return s->journal().empty() ? std::string(kMainBranch) : s->journal().back().branch;
}

DecisionState Service::state(const std::string& session_id, const std::optional<std::string>& branch,
                             std::optional<EventId> at) const {
  const auto s = current(session_id);
  if (at) return snapshot_at(*s, *at);
  const std::string b = branch.value_or(s->journal().empty() ? std::string(kMainBranch) : s->journal().back().branch);
  return snapshot_at(*s, s->head(b));
}

Raster Service::preview(const std::string& session_id, const std::optional<std::string>& branch,
                        std::optional<EventId> at) const {
  return pipeline::compose_preview(state(session_id, branch, at));
}

Raster Service::stage_image(const std::string& session_id, StageId stage, const std::optional<std::string>& branch,
                            std::optional<EventId> at) const {
  const DecisionState s = state(session_id, branch, at);
  if (layer_of(stage) == LayerKind::kStyle) return pipeline::compose_preview(s);
  return layer_raster(s, stage);
}

json Service::summary(const std::string& session_id) const {
  const auto s = current(session_id);
  const std::string active = s->journal().empty() ? std::string(kMainBranch) : s->journal().back().branch;
  json events = json::array();
  for (const auto& ev : s->events()) {
    events.push_back(json{{"event_id", ev.event_id},
                          {"parent_id", ev.parent_id ? json(*ev.parent_id) : json(nullptr)},
                          {"branch", ev.branch},
                          {"stage", std::string(stage_name(ev.stage))},
                          {"tool", ev.tool},
                          {"wall_time", ev.wall_time}});
  }
  json toolsets = json::object();
  for (StageId st : kAllStages) toolsets[std::string(stage_name(st))] = stage_toolset(st);
  json out = meta_json(*s);
  out["prompt"] = s->prompt() ? json(*s->prompt()) : json(nullptr);
  out["canvas"] = json{{"width", s->canvas_width()}, {"height", s->canvas_height()}};
  out["active_branch"] = active;
  out["head"] = s->head(active);
  out["events"] = std::move(events);
  out["state"] = payload::state_summary(snapshot_at(*s, s->head(active)));
  out["toolsets"] = std::move(toolsets);
  return out;
}

std::string Service::export_session(const std::string& session_id) const {
  const auto s = current(session_id);
  const std::string active = s->journal().empty() ? std::string(kMainBranch) : s->journal().back().branch;
  return build_archive(*s, active);
}

std::string Service::import_session(const std::string& archive) {
  Session s = read_archive(archive);
  std::unique_lock lock(sessions_mu_);
  std::string id = s.session_id();
  // The id names a directory under data_dir, so foreign ids are replaced.
  if (!valid_session_id(id) || sessions_.contains(id)) {
    do {
      id = ids_();
    } while (sessions_.contains(id));
    const auto events = s.events();
    Session renamed = session_from_events(id, events);
    s = renamed.with_history(s.heads(), s.journal());
  }
  auto e = std::make_shared<Entry>();
  if (!config_.data_dir.empty()) e->dir = config_.data_dir / "sessions" / id;
  commit(*e, std::make_shared<const Session>(std::move(s)));
  sessions_.emplace(id, std::move(e));
  return id;
}

}  // namespace creo::service
