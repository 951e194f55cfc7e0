#pragma once

#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "creo/core/event.hpp"
#include "creo/core/types.hpp"

namespace creo {

enum class EntryMode { kPromptFirst, kImageFirst };

std::string_view entry_mode_name(EntryMode mode);
EntryMode parse_entry_mode(std::string_view name);

// Chronological record of user-level history operations (edits, reverts,
// branch creations). Reverts move heads and leave no event, so the journal
// is what the action-log export reads.
struct JournalEntry {
  enum class Kind { kEdit, kRevert, kBranch };
  Kind kind = Kind::kEdit;
  EventId event_id = 0;
  std::string branch;
  std::string wall_time;
  bool violated = false;

  friend bool operator==(const JournalEntry&, const JournalEntry&) = default;
};

class SnapshotCache;

// Immutable value: every operation returns a new Session and leaves the
// argument untouched. Copies share event storage and the snapshot cache.
class Session {
 public:
  Session(std::string session_id, EntryMode mode, std::optional<std::string> prompt,
          std::shared_ptr<const Raster> source_image, int canvas_width, int canvas_height);

  const std::string& session_id() const { return session_id_; }
  EntryMode entry_mode() const { return entry_mode_; }
  const std::optional<std::string>& prompt() const { return prompt_; }
  const std::shared_ptr<const Raster>& source_image() const { return source_image_; }
  int canvas_width() const { return canvas_width_; }
  int canvas_height() const { return canvas_height_; }

  std::size_t event_count() const { return events_.size(); }
  bool has_event(EventId id) const;
  const EditEvent& event(EventId id) const;
  std::vector<EditEvent> events() const;
  std::optional<EventId> root_id() const;
  EventId next_event_id() const;

  const std::map<std::string, EventId>& heads() const { return heads_; }
  bool has_branch(const std::string& name) const { return heads_.contains(name); }
  EventId head(const std::string& branch) const;

  const std::vector<JournalEntry>& journal() const { return journal_; }

  // Event ids from the root to `id`, inclusive.
  std::vector<EventId> path_to(EventId id) const;
  bool is_ancestor(EventId ancestor, EventId id) const;

  // Overrides heads and journal, e.g. when restoring persisted metadata.
  Session with_history(std::map<std::string, EventId> heads, std::vector<JournalEntry> journal) const;

 private:
  friend Session append_event(const Session&, EditEvent, bool);
  friend Session revert_to(const Session&, EventId, const std::string&, const std::string&);
  friend Session branch_from(const Session&, EventId, const std::string&, const std::string&);
  friend DecisionState snapshot_at(const Session&, EventId);

  std::size_t index_of(EventId id) const;
  const std::shared_ptr<const EditEvent>& event_ptr(EventId id) const;

  std::string session_id_;
  EntryMode entry_mode_;
  std::optional<std::string> prompt_;
  std::shared_ptr<const Raster> source_image_;
  int canvas_width_;
  int canvas_height_;
  std::vector<std::shared_ptr<const EditEvent>> events_;  // sorted by event_id
  std::map<std::string, EventId> heads_;
  std::vector<JournalEntry> journal_;
  std::shared_ptr<SnapshotCache> cache_;
};

// Validates, applies and appends. The event must replay cleanly on top of its
// parent's snapshot, otherwise the session is left as it was.
Session append_event(const Session& session, EditEvent event, bool violated = false);

// Decision state after replaying root -> event_id. Cached; see replay_uncached.
DecisionState snapshot_at(const Session& session, EventId event_id);
DecisionState replay_uncached(const Session& session, EventId event_id);

// Moves the branch head to `event_id`; later events stay in the log.
Session revert_to(const Session& session, EventId event_id, const std::string& branch = std::string(kMainBranch),
                  const std::string& wall_time = {});

Session branch_from(const Session& session, EventId event_id, const std::string& name,
                    const std::string& wall_time = {});

// Replays a full event list into a fresh session (heads follow appends).
Session session_from_events(std::string session_id, std::span<const EditEvent> events);

}  // namespace creo
