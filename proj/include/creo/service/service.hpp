#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <nlohmann/json.hpp>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "creo/core/error.hpp"
#include "creo/core/event.hpp"
#include "creo/core/session.hpp"
#include "creo/gen/generators.hpp"
#include "creo/pipeline/stage_pipeline.hpp"

namespace creo::service {

struct ServiceConfig {
  std::string listen_address = "127.0.0.1:8080";
  std::filesystem::path data_dir;  // empty: in-memory only
  int canvas_size = 512;
  std::string backend = "mock";
  std::optional<std::string> backend_url;
  double violation_tau = 1.0 / 255.0;

  void validate() const;
  static ServiceConfig from_json(const nlohmann::json& j);
};

// Reads a JSON config file (if given) and applies CREO_BACKEND_URL /
// CREO_DATA_DIR overrides from the environment.
ServiceConfig load_config(const std::optional<std::filesystem::path>& path);

struct CreateSessionRequest {
  EntryMode mode = EntryMode::kPromptFirst;
  std::optional<std::string> prompt;
  std::optional<Raster> image;
  int n_viewpoints = gen::kDefaultViewpointCount;
  std::uint64_t seed = 0;
  std::optional<int> canvas_size;  // prompt_first only; image_first uses the image size
};

struct EditRequest {
  std::string branch = std::string(kMainBranch);
  StageId stage = StageId::kComposition;
  std::string tool;
  nlohmann::json payload = nlohmann::json::object();
  std::optional<Mask> mask;
  std::optional<std::uint64_t> seed;
};

struct EditResult {
  EventId event_id = 0;
  std::string branch;
  Raster preview;
  pipeline::ViolationReport violation;
  std::size_t spillover = 0;
};

using Clock = std::function<std::string()>;
using IdGenerator = std::function<std::string()>;

std::string utc_now();
bool valid_session_id(std::string_view id);
std::string random_session_id();

class Service {
 public:
  explicit Service(ServiceConfig config, std::unique_ptr<gen::Backend> backend = nullptr, Clock clock = utc_now,
                   IdGenerator ids = random_session_id);
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  const ServiceConfig& config() const { return config_; }

  std::string create_session(const CreateSessionRequest& request);
  EditResult submit_edit(const std::string& session_id, const EditRequest& request);

  // Lock/unlock are recorded as edits; the lock id is the lock event's id.
  EventId add_lock(const std::string& session_id, const std::string& branch, StageId stage,
                   const std::optional<Mask>& mask);
  EventId remove_lock(const std::string& session_id, const std::string& branch, std::uint64_t lock_id);

  void create_branch(const std::string& session_id, EventId from_event, const std::string& name);
  void revert(const std::string& session_id, EventId event_id, const std::string& branch);

  Session session(const std::string& session_id) const;
  std::vector<std::string> session_ids() const;
  // Branch whose head the user last moved (last journal entry).
  std::string active_branch(const std::string& session_id) const;

  DecisionState state(const std::string& session_id, const std::optional<std::string>& branch,
                      std::optional<EventId> at) const;
  Raster preview(const std::string& session_id, const std::optional<std::string>& branch,
                 std::optional<EventId> at) const;
  Raster stage_image(const std::string& session_id, StageId stage, const std::optional<std::string>& branch,
                     std::optional<EventId> at) const;
  nlohmann::json summary(const std::string& session_id) const;

  std::string export_session(const std::string& session_id) const;
  std::string import_session(const std::string& archive);

 private:
  struct Entry;
  std::shared_ptr<Entry> entry(const std::string& session_id) const;
  std::shared_ptr<const Session> current(const std::string& session_id) const;
  void commit(Entry& entry, std::shared_ptr<const Session> next);
  void load_all();

  ServiceConfig config_;
  std::unique_ptr<gen::Backend> backend_;
  Clock clock_;
  IdGenerator ids_;
  mutable std::shared_mutex sessions_mu_;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;
};

// Archive: JSON object {"format", "session_id", "files": {name: base64}}.
// Files: events.ndjson, meta.json, layers/<Stage>.png, preview.png, actions.ndjson.
std::string build_archive(const Session& session, const std::string& branch);
Session read_archive(const std::string& archive);

nlohmann::json meta_json(const Session& session);
Session apply_meta(const Session& session, const nlohmann::json& meta);

// Mechanical action log: one record per user-level operation, intent and
// agency left null for annotation.
std::string action_log_ndjson(const Session& session, const std::string& condition = "creo");

// Head preview of a raw event log (the last event unless `at` is given).
Raster render_event_log(std::string_view ndjson, std::optional<EventId> at);

int http_status_for(ErrorCode code);

}  // namespace creo::service
