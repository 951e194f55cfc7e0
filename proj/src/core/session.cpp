#include "creo/core/session.hpp"

#include <algorithm>
#include <deque>
#include <mutex>
#include <unordered_map>

#include "creo/core/error.hpp"
#include "creo/core/payload.hpp"
#include "creo/core/reducer.hpp"

namespace creo {

// Snapshots keyed by event identity (the immutable event object, not its id,
// so sessions that diverged from a common ancestor never alias entries).
class SnapshotCache {
 public:
  std::shared_ptr<const DecisionState> find(const EditEvent* key) {
    std::lock_guard lock(mu_);
    auto it = entries_.find(key);
    return it == entries_.end() ? nullptr : it->second.state;
  }

  void put(const std::shared_ptr<const EditEvent>& event, std::shared_ptr<const DecisionState> state) {
    std::lock_guard lock(mu_);
    if (entries_.contains(event.get())) return;
    entries_.emplace(event.get(), Entry{event, std::move(state)});
    order_.push_back(event.get());
    while (order_.size() > kCapacity) {
      entries_.erase(order_.front());
      order_.pop_front();
    }
  }

 private:
  static constexpr std::size_t kCapacity = 256;
  struct Entry {
    std::shared_ptr<const EditEvent> keep_alive;
    std::shared_ptr<const DecisionState> state;
  };
  std::mutex mu_;
  std::unordered_map<const EditEvent*, Entry> entries_;
  std::deque<const EditEvent*> order_;
};

std::string_view entry_mode_name(EntryMode mode) {
  return mode == EntryMode::kPromptFirst ? "prompt_first" : "image_first";
}

EntryMode parse_entry_mode(std::string_view name) {
  if (name == "prompt_first") return EntryMode::kPromptFirst;
  if (name == "image_first") return EntryMode::kImageFirst;
  fail(ErrorCode::kInvalidArgument, "unknown entry mode '" + std::string(name) + "'");
}

Session::Session(std::string session_id, EntryMode mode, std::optional<std::string> prompt,
                 std::shared_ptr<const Raster> source_image, int canvas_width, int canvas_height)
    : session_id_(std::move(session_id)),
      entry_mode_(mode),
      prompt_(std::move(prompt)),
      source_image_(std::move(source_image)),
      canvas_width_(canvas_width),
      canvas_height_(canvas_height),
      cache_(std::make_shared<SnapshotCache>()) {
  if (canvas_width < 1 || canvas_height < 1) fail(ErrorCode::kInvalidArgument, "canvas must be at least 1x1");
  if (mode == EntryMode::kPromptFirst && (!prompt_ || prompt_->empty())) {
    fail(ErrorCode::kMissingPrompt, "prompt_first sessions need a prompt");
  }
  if (mode == EntryMode::kImageFirst && !source_image_) {
    fail(ErrorCode::kMissingImage, "image_first sessions need a source image");
  }
}

std::size_t Session::index_of(EventId id) const {
  auto it = std::lower_bound(events_.begin(), events_.end(), id,
                             [](const auto& e, EventId v) { return e->event_id < v; });
  if (it == events_.end() || (*it)->event_id != id) {
    fail(ErrorCode::kUnknownEvent, "no event " + std::to_string(id));
  }
  return static_cast<std::size_t>(it - events_.begin());
}

const std::shared_ptr<const EditEvent>& Session::event_ptr(EventId id) const { return events_[index_of(id)]; }

bool Session::has_event(EventId id) const {
  auto it = std::lower_bound(events_.begin(), events_.end(), id,
                             [](const auto& e, EventId v) { return e->event_id < v; });
  return it != events_.end() && (*it)->event_id == id;
}

const EditEvent& Session::event(EventId id) const { return *event_ptr(id); }

std::vector<EditEvent> Session::events() const {
  std::vector<EditEvent> out;
  out.reserve(events_.size());
  for (const auto& e : events_) out.push_back(*e);
  return out;
}

std::optional<EventId> Session::root_id() const {
  if (events_.empty()) return std::nullopt;
  return events_.front()->event_id;
}

EventId Session::next_event_id() const { return events_.empty() ? 1 : events_.back()->event_id + 1; }

EventId Session::head(const std::string& branch) const {
  auto it = heads_.find(branch);
  if (it == heads_.end()) fail(ErrorCode::kUnknownBranch, "no branch '" + branch + "'");
  return it->second;
}

std::vector<EventId> Session::path_to(EventId id) const {
  std::vector<EventId> path;
  std::optional<EventId> cur = id;
  while (cur) {
    const auto& e = event(*cur);
    path.push_back(e.event_id);
    cur = e.parent_id;
  }
  std::reverse(path.begin(), path.end());
  return path;
}

bool Session::is_ancestor(EventId ancestor, EventId id) const {
  std::optional<EventId> cur = id;
  while (cur) {
    if (*cur == ancestor) return true;
    cur = event(*cur).parent_id;
  }
  return false;
}

Session Session::with_history(std::map<std::string, EventId> heads, std::vector<JournalEntry> journal) const {
  for (const auto& [name, id] : heads) {
    if (!has_event(id)) fail(ErrorCode::kUnknownEvent, "head of '" + name + "' points at missing event");
  }
  Session next = *this;
  next.heads_ = std::move(heads);
  next.journal_ = std::move(journal);
  return next;
}

DecisionState replay_uncached(const Session& session, EventId event_id) {
  const auto path = session.path_to(event_id);
  DecisionState state = root_state(session.event(path.front()));
  for (std::size_t i = 1; i < path.size(); ++i) state = apply_event(state, session.event(path[i]));
  return state;
}

DecisionState snapshot_at(const Session& session, EventId event_id) {
  const auto path = session.path_to(event_id);
  // Walk back to the nearest cached ancestor, then replay forward.
  std::shared_ptr<const DecisionState> state;
  std::size_t start = path.size();
  while (start > 0) {
    state = session.cache_->find(session.event_ptr(path[start - 1]).get());
    if (state) break;
    --start;
  }
  for (std::size_t i = start; i < path.size(); ++i) {
    const auto& ptr = session.event_ptr(path[i]);
    state = std::make_shared<const DecisionState>(i == 0 ? root_state(*ptr) : apply_event(*state, *ptr));
    session.cache_->put(ptr, state);
  }
  return *state;
}

Session append_event(const Session& session, EditEvent event, bool violated) {
  if (session.has_event(event.event_id)) {
    fail(ErrorCode::kDuplicateEventId, "event " + std::to_string(event.event_id) + " already exists");
  }
  if (!session.events_.empty() && event.event_id < session.events_.back()->event_id) {
    fail(ErrorCode::kInvalidArgument, "event ids must increase monotonically");
  }
  if (event.mask && !event.mask->same_size(session.canvas_width_, session.canvas_height_)) {
    fail(ErrorCode::kDimensionMismatch, "event mask does not match the canvas");
  }

  std::shared_ptr<const DecisionState> state;
  if (!event.parent_id) {
    if (!session.events_.empty()) fail(ErrorCode::kUnknownParent, "session already has a root event");
    state = std::make_shared<const DecisionState>(root_state(event));
    if (!state->composition->same_size(session.canvas_width_, session.canvas_height_)) {
      fail(ErrorCode::kDimensionMismatch, "root event canvas differs from the session canvas");
    }
  } else {
    if (!session.has_event(*event.parent_id)) {
      fail(ErrorCode::kUnknownParent, "parent " + std::to_string(*event.parent_id) + " does not exist");
    }
    if (!session.has_branch(event.branch)) fail(ErrorCode::kUnknownBranch, "no branch '" + event.branch + "'");
    state = std::make_shared<const DecisionState>(apply_event(snapshot_at(session, *event.parent_id), event));
  }

  Session next = session;
  auto ptr = std::make_shared<const EditEvent>(std::move(event));
  next.events_.push_back(ptr);
  next.heads_[ptr->branch] = ptr->event_id;
  next.journal_.push_back({JournalEntry::Kind::kEdit, ptr->event_id, ptr->branch, ptr->wall_time, violated});
  next.cache_->put(ptr, std::move(state));
  return next;
}

Session revert_to(const Session& session, EventId event_id, const std::string& branch, const std::string& wall_time) {
  const EventId head = session.head(branch);
  const auto& target = session.event(event_id);
  if (target.branch != branch && !session.is_ancestor(event_id, head)) {
    fail(ErrorCode::kUnknownEvent, "event " + std::to_string(event_id) + " is not on branch '" + branch + "'");
  }
  if (event_id == head) return session;
  Session next = session;
  next.heads_[branch] = event_id;
  next.journal_.push_back({JournalEntry::Kind::kRevert, event_id, branch, wall_time, false});
  return next;
}

Session branch_from(const Session& session, EventId event_id, const std::string& name, const std::string& wall_time) {
  if (!session.has_event(event_id)) fail(ErrorCode::kUnknownEvent, "no event " + std::to_string(event_id));
  if (name.empty()) fail(ErrorCode::kInvalidArgument, "branch name must not be empty");
  if (session.has_branch(name)) fail(ErrorCode::kDuplicateBranchName, "branch '" + name + "' already exists");
  Session next = session;
  next.heads_[name] = event_id;
  next.journal_.push_back({JournalEntry::Kind::kBranch, event_id, name, wall_time, false});
  return next;
}

Session session_from_events(std::string session_id, std::span<const EditEvent> events) {
  if (events.empty()) fail(ErrorCode::kInvalidArgument, "event log is empty");
  const EditEvent& root = events.front();
  if (root.parent_id || root.tool != kRootTool) fail(ErrorCode::kInvalidArgument, "first event must be the root");
  const auto& p = root.payload;
  const EntryMode mode = parse_entry_mode(p.at("mode").get<std::string>());
  std::optional<std::string> prompt;
  if (p.contains("prompt") && p.at("prompt").is_string()) prompt = p.at("prompt").get<std::string>();
  std::shared_ptr<const Raster> source;
  if (mode == EntryMode::kImageFirst) source = std::make_shared<const Raster>(payload::raster_from_json(p.at("source")));
  Session session(std::move(session_id), mode, prompt, source, p.at("width").get<int>(), p.at("height").get<int>());
  for (const auto& e : events) {
    // Branch heads are implied by the log: a branch first appears on an event
    // whose parent lives elsewhere.
    if (e.parent_id && !session.has_branch(e.branch)) {
      session = branch_from(session, *e.parent_id, e.branch, e.wall_time);
    }
    session = append_event(session, e);
  }
  return session;
}

}  // namespace creo
