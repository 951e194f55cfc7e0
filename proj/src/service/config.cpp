#include <cstdlib>
#include <fmt/chrono.h>
#include <fmt/format.h>

#include <chrono>
#include <random>

#include "creo/core/codec.hpp"
#include "creo/core/error.hpp"
#include "creo/service/service.hpp"

namespace creo::service {

using nlohmann::json;

void ServiceConfig::validate() const {
  const auto colon = listen_address.rfind(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 == listen_address.size()) {
    fail(ErrorCode::kInvalidArgument, "listen_address must be host:port, got '" + listen_address + "'");
  }
  if (canvas_size < 1 || canvas_size > 8192) fail(ErrorCode::kInvalidArgument, "canvas_size must be in [1, 8192]");
  if (!(violation_tau >= 0.0)) fail(ErrorCode::kInvalidArgument, "violation_tau must be >= 0");
  if (backend != "mock" && backend != "remote") fail(ErrorCode::kInvalidArgument, "backend must be mock or remote");
  if (backend == "remote" && (!backend_url || backend_url->empty())) {
    fail(ErrorCode::kInvalidArgument, "remote backend requires backend_url");
  }
}

ServiceConfig ServiceConfig::from_json(const json& j) {
  if (!j.is_object()) fail(ErrorCode::kInvalidArgument, "config must be a JSON object");
  ServiceConfig c;
  try {
    if (j.contains("listen_address")) c.listen_address = j.at("listen_address").get<std::string>();
    if (j.contains("data_dir")) c.data_dir = j.at("data_dir").get<std::string>();
    if (j.contains("canvas_size")) c.canvas_size = j.at("canvas_size").get<int>();
    if (j.contains("backend")) c.backend = j.at("backend").get<std::string>();
    if (j.contains("backend_url") && !j.at("backend_url").is_null()) c.backend_url = j.at("backend_url").get<std::string>();
    if (j.contains("violation_tau")) c.violation_tau = j.at("violation_tau").get<double>();
  } catch (const json::exception& ex) {
    fail(ErrorCode::kInvalidArgument, std::string("bad config field: ") + ex.what());
  }
  return c;
}

ServiceConfig load_config(const std::optional<std::filesystem::path>& path) {
  ServiceConfig c;
  if (path) {
    json j;
    try {
      j = json::parse(read_file(*path));
    } catch (const json::parse_error& ex) {
      fail(ErrorCode::kInvalidArgument, "config " + path->string() + ": " + ex.what());
    }
    c = ServiceConfig::from_json(j);
  }
  if (const char* url = std::getenv("CREO_BACKEND_URL"); url && *url) c.backend_url = url;
  if (const char* dir = std::getenv("CREO_DATA_DIR"); dir && *dir) c.data_dir = dir;
  c.validate();
  return c;
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count() % 1000;
  return fmt::format("{:%Y-%m-%dT%H:%M:%S}.{:03d}Z", fmt::gmtime(std::chrono::system_clock::to_time_t(now)), ms);
}

std::string random_session_id() {
  static thread_local std::mt19937_64 rng{std::random_device{}()};
  return fmt::format("s{:016x}", rng());
}

int http_status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnknownSession:
    case ErrorCode::kUnknownEvent:
    case ErrorCode::kUnknownBranch:
    case ErrorCode::kUnknownLock:
      return 404;
    case ErrorCode::kStageLocked:
    case ErrorCode::kLockedRegionRequested:
    case ErrorCode::kDuplicateBranchName:
      return 409;
    case ErrorCode::kBackendUnavailable:
      return 503;
    case ErrorCode::kIo:
      return 500;
    default:
      return 400;
  }
}

}  // namespace creo::service
