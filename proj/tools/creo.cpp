#include <CLI11.hpp>
#include <fmt/format.h>

#include <csignal>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "creo/core/codec.hpp"
#include "creo/core/error.hpp"
#include "creo/metrics/metrics.hpp"
#include "creo/service/http_server.hpp"
#include "creo/service/service.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using namespace creo;

service::HttpServer* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}

int run_serve(const std::optional<fs::path>& config_path) {
  const auto config = service::load_config(config_path);
  service::Service svc(config);
  service::HttpServer server(svc);
  const auto colon = config.listen_address.rfind(':');
  const std::string host = config.listen_address.substr(0, colon);
  const int port = std::stoi(config.listen_address.substr(colon + 1));
  const int bound = server.bind(host, port);
  g_server = &server;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  fmt::print("creo: listening on {}:{} (backend {}, data_dir {})\n", host, bound, config.backend,
             config.data_dir.empty() ? std::string("<memory>") : config.data_dir.string());
  std::fflush(stdout);
  server.run();
  g_server = nullptr;
  return 0;
}

int run_render(const fs::path& events, std::optional<EventId> at, const fs::path& out) {
  const Raster preview = service::render_event_log(read_file(events), at);
  write_file(out, encode_png(preview));
  return 0;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
    cells.push_back(cell);
  }
  return cells;
}

Raster load_image(const fs::path& path) { return decode_png(read_file(path)); }

// anchors CSV: session_id,condition,first_png,final_png (paths relative to the CSV).
std::vector<metrics::SessionAnchoring> load_anchors(const fs::path& csv) {
  const metrics::ToyEmbedder embedder;
  std::vector<metrics::SessionAnchoring> out;
  std::istringstream in(read_file(csv));
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.rfind("session_id,", 0) == 0) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != 4) fail(ErrorCode::kMalformedRecord, fmt::format("{}:{}: expected 4 columns", csv.string(), line_no));
    const Raster first = load_image(csv.parent_path() / cells[2]);
    const Raster last = load_image(csv.parent_path() / cells[3]);
    metrics::SessionAnchoring a;
    a.session_id = cells[0];
    a.condition = cells[1];
    a.distance = metrics::anchoring_distance(first, last, embedder);
    const auto ef = embedder.embed(first);
    a.final_embedding = embedder.embed(last);
    a.cosine = metrics::cosine_similarity(ef, a.final_embedding);
    out.push_back(std::move(a));
  }
  return out;
}

json row_json(const metrics::MetricsRow& r) {
  json j{{"session_id", r.session_id}, {"condition", r.condition}, {"actions", r.actions}};
  for (auto m : metrics::kAllMetrics) j[std::string(metrics::metric_key(m))] = metrics::metric_value(r, m);
  return j;
}

int run_analyze(const std::vector<fs::path>& logs, const fs::path& out, const std::optional<fs::path>& csv,
                const std::optional<fs::path>& json_out, const std::optional<fs::path>& anchors) {
  std::vector<metrics::ActionRecord> records;
  for (const auto& path : logs) {
    try {
      auto part = metrics::parse_action_log(read_file(path));
      records.insert(records.end(), part.begin(), part.end());
    } catch (const Error& ex) {
      fail(ex.code(), path.string() + ": " + ex.what());
    }
  }
  if (records.empty()) fail(ErrorCode::kEmptyInput, "no action records in the given logs");

  std::vector<metrics::MetricsRow> rows;
  for (const auto& session : metrics::group_sessions(records)) rows.push_back(metrics::session_metrics(session));

  std::vector<std::string> conditions;
  for (const auto& r : rows) {
    if (std::find(conditions.begin(), conditions.end(), r.condition) == conditions.end()) conditions.push_back(r.condition);
  }
  std::vector<metrics::ConditionSummary> summaries;
  for (const auto& c : conditions) {
    std::vector<metrics::MetricsRow> subset;
    std::copy_if(rows.begin(), rows.end(), std::back_inserter(subset),
                 [&](const metrics::MetricsRow& r) { return r.condition == c; });
    summaries.push_back(metrics::aggregate_condition(subset));
  }

  std::optional<metrics::StageUsageReport> usage;
  if (std::all_of(records.begin(), records.end(), [](const auto& r) { return r.stage.has_value(); })) {
    usage = metrics::stage_usage_report(records);
  }
  std::vector<metrics::AnchoringStats> anchoring;
  if (anchors) anchoring = metrics::summarize_anchoring(load_anchors(*anchors));

  write_file(out, metrics::format_report(summaries, anchoring, usage));
  if (csv) write_file(*csv, metrics::rows_to_csv(rows));
  if (json_out) {
    json j;
    j["rows"] = json::array();
    for (const auto& r : rows) j["rows"].push_back(row_json(r));
    j["summaries"] = json::array();
    for (const auto& s : summaries) {
      json sj{{"condition", s.condition}, {"sessions", s.sessions}};
      for (const auto& [m, st] : s.stats) sj[std::string(metrics::metric_key(m))] = json{{"mean", st.mean}, {"sd", st.sd}};
      j["summaries"].push_back(std::move(sj));
    }
    if (usage) {
      json u{{"sessions", usage->sessions}, {"actions", usage->actions}, {"revisit_rate", usage->revisit_rate},
             {"skip_rate", usage->skip_rate}};
      for (StageId s : kAllStages) {
        u["action_share"][std::string(stage_name(s))] = usage->action_share.at(s);
        u["adoption"][std::string(stage_name(s))] = usage->adoption.at(s);
      }
      j["stage_usage"] = std::move(u);
    }
    for (const auto& a : anchoring) {
      j["anchoring"][a.condition] = json{{"distance", {{"mean", a.distance.mean}, {"sd", a.distance.sd}}},
                                         {"cosine", {{"mean", a.cosine.mean}, {"sd", a.cosine.sd}}},
                                         {"spread", a.spread ? json(*a.spread) : json(nullptr)}};
    }
    write_file(*json_out, j.dump(2) + "\n");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"creo: staged image ideation engine"};
  app.require_subcommand(1);

  auto* serve = app.add_subcommand("serve", "Run the REST service");
  std::optional<fs::path> config;
  serve->add_option("--config", config, "JSON config file")->check(CLI::ExistingFile);

  auto* render = app.add_subcommand("render", "Render the preview of an event log");
  fs::path events;
  std::optional<EventId> at;
  fs::path render_out;
  render->add_option("events", events, "events.ndjson")->required()->check(CLI::ExistingFile);
  render->add_option("--at", at, "Event id to render (default: last event)");
  render->add_option("--out", render_out, "Output PNG")->required();

  auto* analyze = app.add_subcommand("analyze", "Compute session metrics from annotated action logs");
  std::vector<fs::path> logs;
  fs::path report;
  std::optional<fs::path> csv, json_out, anchors;
  analyze->add_option("logs", logs, "Action logs (NDJSON)")->required()->check(CLI::ExistingFile);
  analyze->add_option("--out", report, "Text report")->required();
  analyze->add_option("--csv", csv, "Per-session metrics CSV");
  analyze->add_option("--json", json_out, "Machine-readable rows and summaries");
  analyze->add_option("--anchors", anchors, "CSV of session_id,condition,first_png,final_png")->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*serve) return run_serve(config);
    if (*render) return run_render(events, at, render_out);
    if (*analyze) return run_analyze(logs, report, csv, json_out, anchors);
  } catch (const Error& ex) {
    fmt::print(stderr, "creo: {}: {}\n", error_code_name(ex.code()), ex.what());
    return 1;
  } catch (const std::exception& ex) {
    fmt::print(stderr, "creo: {}\n", ex.what());
    return 1;
  }
  return 0;
}
