#include "creo/metrics/metrics.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>
#include <set>
#include <unordered_map>

#include "creo/core/error.hpp"

namespace creo::metrics {

using nlohmann::json;

namespace {

template <typename E, std::size_t N>
std::optional<E> lookup(const std::array<std::pair<std::string_view, E>, N>& table, std::string_view name) {
  for (const auto& [n, v] : table) {
    if (n == name) return v;
  }
  return std::nullopt;
}

constexpr std::array<std::pair<std::string_view, ActionType>, 5> kActionTypes = {{
    {"construct", ActionType::kConstruct},
    {"evaluate", ActionType::kEvaluate},
    {"generate", ActionType::kGenerate},
    {"refine", ActionType::kRefine},
    {"repair", ActionType::kRepair},
}};
constexpr std::array<std::pair<std::string_view, Intent>, 3> kIntents = {{
    {"on_intent", Intent::kOnIntent},
    {"pivot", Intent::kPivot},
    {"drift", Intent::kDrift},
}};
constexpr std::array<std::pair<std::string_view, Agency>, 2> kAgencies = {{
    {"user_driven", Agency::kUserDriven},
    {"model_led", Agency::kModelLed},
}};

[[noreturn]] void malformed(std::size_t line, const std::string& what) {
  fail(ErrorCode::kMalformedRecord, fmt::format("line {}: {}", line, what));
}

const json& field(const json& j, const char* name, std::size_t line) {
  auto it = j.find(name);
  if (it == j.end() || it->is_null()) {
    fail(ErrorCode::kMissingField, fmt::format("line {}: missing field '{}'", line, name));
  }
  return *it;
}

std::string string_field(const json& j, const char* name, std::size_t line) {
  const json& v = field(j, name, line);
  if (!v.is_string()) malformed(line, fmt::format("'{}' must be a string", name));
  return v.get<std::string>();
}

std::int64_t int_field(const json& j, const char* name, std::size_t line) {
  const json& v = field(j, name, line);
  if (!v.is_number_integer()) malformed(line, fmt::format("'{}' must be an integer", name));
  return v.get<std::int64_t>();
}

bool bool_field(const json& j, const char* name, std::size_t line) {
  const json& v = field(j, name, line);
  if (!v.is_boolean()) malformed(line, fmt::format("'{}' must be a boolean", name));
  return v.get<bool>();
}

template <typename E, std::size_t N>
E enum_field(const json& j, const char* name, std::size_t line,
             const std::array<std::pair<std::string_view, E>, N>& table) {
  const std::string s = string_field(j, name, line);
  auto v = lookup(table, s);
  if (!v) malformed(line, fmt::format("'{}' has unknown value '{}'", name, s));
  return *v;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

double pct(std::size_t n, std::size_t total) { return 100.0 * static_cast<double>(n) / static_cast<double>(total); }

// Summation over sorted values, so the result does not depend on input order.
double stable_sum(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  double s = 0;
  for (double x : v) s += x;
  return s;
}

}  // namespace

std::string_view action_type_name(ActionType t) {
  for (const auto& [n, v] : kActionTypes) {
    if (v == t) return n;
  }
  return "construct";
}

std::string_view intent_name(Intent i) {
  for (const auto& [n, v] : kIntents) {
    if (v == i) return n;
  }
  return "on_intent";
}

std::string_view agency_name(Agency a) { return a == Agency::kUserDriven ? "user_driven" : "model_led"; }

std::vector<ActionRecord> parse_action_log(std::string_view text) {
  std::vector<ActionRecord> out;
  std::unordered_map<std::string, std::int64_t> last_index;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto nl = text.find('\n', pos);
    const auto end = nl == std::string_view::npos ? text.size() : nl;
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;

    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& ex) {
      malformed(line_no, std::string("not JSON: ") + ex.what());
    }
    if (!j.is_object()) malformed(line_no, "record must be an object");

    ActionRecord r;
    r.session_id = string_field(j, "session_id", line_no);
    r.condition = string_field(j, "condition", line_no);
    r.index = int_field(j, "index", line_no);
    r.action_type = enum_field(j, "action_type", line_no, kActionTypes);
    r.intent = enum_field(j, "intent", line_no, kIntents);
    r.agency = enum_field(j, "agency", line_no, kAgencies);
    r.direction_change = bool_field(j, "direction_change", line_no);
    r.invariant_violation = bool_field(j, "invariant_violation", line_no);
    r.iteration_id = int_field(j, "iteration_id", line_no);
    if (auto it = j.find("stage"); it != j.end() && !it->is_null()) {
      if (!it->is_string()) malformed(line_no, "'stage' must be a string");
      try {
        r.stage = parse_stage(it->get<std::string>());
      } catch (const Error&) {
        malformed(line_no, "unknown stage '" + it->get<std::string>() + "'");
      }
    }

    auto [it, fresh] = last_index.try_emplace(r.session_id, r.index);
    if (!fresh) {
      if (r.index <= it->second) {
        fail(ErrorCode::kNonMonotonicIndex,
             fmt::format("line {}: index {} does not follow {} in session '{}'", line_no, r.index, it->second,
                         r.session_id));
      }
      it->second = r.index;
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<std::vector<ActionRecord>> group_sessions(std::span<const ActionRecord> records) {
  std::vector<std::vector<ActionRecord>> out;
  std::unordered_map<std::string, std::size_t> slot;
  for (const auto& r : records) {
    auto [it, fresh] = slot.try_emplace(r.session_id, out.size());
    if (fresh) out.emplace_back();
    auto& group = out[it->second];
    if (!group.empty() && r.index <= group.back().index) {
      fail(ErrorCode::kNonMonotonicIndex, fmt::format("session '{}': index {} does not follow {}", r.session_id,
                                                      r.index, group.back().index));
    }
    group.push_back(r);
  }
  return out;
}

MetricsRow session_metrics(std::span<const ActionRecord> records) {
  if (records.empty()) fail(ErrorCode::kEmptySession, "session has no actions");
  MetricsRow row;
  row.session_id = records.front().session_id;
  row.condition = records.front().condition;
  std::set<std::int64_t> iterations;
  std::map<ActionType, std::size_t> by_type;
  std::size_t changes = 0, drift = 0, pivot = 0, user = 0, violations = 0;
  for (const auto& r : records) {
    if (r.session_id != row.session_id) fail(ErrorCode::kMixedSessions, "records span several sessions");
    if (r.condition != row.condition) {
      fail(ErrorCode::kMixedConditions, "session '" + row.session_id + "' has records from several conditions");
    }
    iterations.insert(r.iteration_id);
    ++by_type[r.action_type];
    changes += r.direction_change ? 1 : 0;
    drift += r.intent == Intent::kDrift ? 1 : 0;
    pivot += r.intent == Intent::kPivot ? 1 : 0;
    user += r.agency == Agency::kUserDriven ? 1 : 0;
    violations += r.invariant_violation ? 1 : 0;
  }
  const std::size_t n = records.size();
  row.actions = static_cast<std::int64_t>(n);
  row.direction_changes = static_cast<double>(changes);
  row.breadth = static_cast<double>(iterations.size());
  row.drift_pct = pct(drift, n);
  row.pivot_pct = pct(pivot, n);
  row.construct_pct = pct(by_type[ActionType::kConstruct], n);
  row.evaluate_pct = pct(by_type[ActionType::kEvaluate], n);
  row.generate_pct = pct(by_type[ActionType::kGenerate], n);
  row.refine_pct = pct(by_type[ActionType::kRefine], n);
  row.repair_pct = pct(by_type[ActionType::kRepair], n);
  row.agency_pct = pct(user, n);
  row.violation_pct = pct(violations, n);
  row.revision_burden = static_cast<double>(by_type[ActionType::kRepair]) / static_cast<double>(n);
  return row;
}

std::string_view metric_key(Metric m) {
  switch (m) {
    case Metric::kDirectionChanges:
      return "direction_changes";
    case Metric::kBreadth:
      return "breadth";
    case Metric::kDrift:
      return "drift_pct";
    case Metric::kPivot:
      return "pivot_pct";
    case Metric::kConstruct:
      return "construct_pct";
    case Metric::kEvaluate:
      return "evaluate_pct";
    case Metric::kAgency:
      return "agency_pct";
    case Metric::kRevisionBurden:
      return "revision_burden";
    case Metric::kViolation:
      return "violation_pct";
    case Metric::kGenerate:
      return "generate_pct";
    case Metric::kRefine:
      return "refine_pct";
    case Metric::kRepair:
      return "repair_pct";
  }
  return "";
}

double metric_value(const MetricsRow& r, Metric m) {
  switch (m) {
    case Metric::kDirectionChanges:
      return r.direction_changes;
    case Metric::kBreadth:
      return r.breadth;
    case Metric::kDrift:
      return r.drift_pct;
    case Metric::kPivot:
      return r.pivot_pct;
    case Metric::kConstruct:
      return r.construct_pct;
    case Metric::kEvaluate:
      return r.evaluate_pct;
    case Metric::kAgency:
      return r.agency_pct;
    case Metric::kRevisionBurden:
      return r.revision_burden;
    case Metric::kViolation:
      return r.violation_pct;
    case Metric::kGenerate:
      return r.generate_pct;
    case Metric::kRefine:
      return r.refine_pct;
    case Metric::kRepair:
      return r.repair_pct;
  }
  return 0;
}

Stat mean_sd(std::vector<double> values) {
  if (values.empty()) fail(ErrorCode::kEmptyInput, "no values");
  const double n = static_cast<double>(values.size());
  const double mean = stable_sum(values) / n;
  if (values.size() == 1) return {mean, 0.0};
  std::vector<double> sq;
  sq.reserve(values.size());
  for (double v : values) sq.push_back((v - mean) * (v - mean));
  return {mean, std::sqrt(stable_sum(std::move(sq)) / (n - 1.0))};
}

ConditionSummary aggregate_condition(std::span<const MetricsRow> rows) {
  if (rows.empty()) fail(ErrorCode::kEmptyInput, "no session rows");
  ConditionSummary s;
  s.condition = rows.front().condition;
  s.sessions = rows.size();
  for (const auto& r : rows) {
    if (r.condition != s.condition) fail(ErrorCode::kMixedConditions, "rows come from several conditions");
  }
  for (Metric m : kAllMetrics) {
    std::vector<double> v;
    v.reserve(rows.size());
    for (const auto& r : rows) v.push_back(metric_value(r, m));
    s.stats[m] = mean_sd(std::move(v));
  }
  return s;
}

std::string format_cell(const Stat& s) {
  return fmt::format("{:.1f}({})", s.mean, std::llround(s.sd * 10.0));
}

StageUsageReport stage_usage_report(std::span<const ActionRecord> records) {
  if (records.empty()) fail(ErrorCode::kEmptyInput, "no action records");
  for (const auto& r : records) {
    if (!r.stage) fail(ErrorCode::kMissingField, "record " + std::to_string(r.index) + " of '" + r.session_id +
                                                     "' has no stage");
  }
  const auto sessions = group_sessions(records);
  StageUsageReport rep;
  rep.sessions = sessions.size();
  rep.actions = records.size();
  std::map<StageId, std::size_t> actions, adopters;
  std::size_t revisits = 0, skips = 0;
  for (const auto& session : sessions) {
    std::set<StageId> used;
    bool revisited = false;
    std::optional<StageId> prev;
    int max_ordinal = -1;
    for (const auto& r : session) {
      ++actions[*r.stage];
      used.insert(*r.stage);
      if (prev && stage_ordinal(*r.stage) < stage_ordinal(*prev)) revisited = true;
      prev = r.stage;
      max_ordinal = std::max(max_ordinal, stage_ordinal(*r.stage));
    }
    for (StageId s : used) ++adopters[s];
    bool skipped = false;
    for (StageId s : kAllStages) {
      if (stage_ordinal(s) < max_ordinal && !used.contains(s)) skipped = true;
    }
    revisits += revisited ? 1 : 0;
    skips += skipped ? 1 : 0;
  }
  for (StageId s : kAllStages) {
    rep.action_share[s] = pct(actions[s], rep.actions);
    rep.adoption[s] = pct(adopters[s], rep.sessions);
  }
  rep.revisit_rate = pct(revisits, rep.sessions);
  rep.skip_rate = pct(skips, rep.sessions);
  return rep;
}

std::string format_report(std::span<const ConditionSummary> summaries, std::span<const AnchoringStats> anchoring,
                          const std::optional<StageUsageReport>& usage) {
  struct Line {
    const char* label;
    std::optional<Metric> metric;
  };
  static const Line kLines[] = {
      {"Exploration & Anchoring", std::nullopt},
      {"Direction changes (# changes per session)", Metric::kDirectionChanges},
      {"Exploration breadth (# iterations per branch)", Metric::kBreadth},
      {"Concept drift (% unintended drift actions)", Metric::kDrift},
      {"Intentional pivots (% pivot actions)", Metric::kPivot},
      {"Control & Predictability", std::nullopt},
      {"Constructive engagement (% construct actions)", Metric::kConstruct},
      {"Evaluation-heavy behavior (% evaluate actions)", Metric::kEvaluate},
      {"Behavioral agency (% user-driven actions)", Metric::kAgency},
      {"Revision burden (ratio of repairs to total actions)", Metric::kRevisionBurden},
      {"Unintended changes (% invariant violations)", Metric::kViolation},
  };
  constexpr int kLabelWidth = 54;
  constexpr int kCellWidth = 14;
  std::string out = fmt::format("{:<{}}", "Metric", kLabelWidth);
  for (const auto& s : summaries) out += fmt::format("{:>{}}", s.condition, kCellWidth);
  out += '\n';
  out += fmt::format("{:<{}}", "Sessions (n)", kLabelWidth);
  for (const auto& s : summaries) out += fmt::format("{:>{}}", s.sessions, kCellWidth);
  out += '\n';
  for (const auto& line : kLines) {
    if (!line.metric) {
      out += std::string(line.label) + '\n';
      continue;
    }
    out += fmt::format("{:<{}}", line.label, kLabelWidth);
    for (const auto& s : summaries) out += fmt::format("{:>{}}", format_cell(s.stats.at(*line.metric)), kCellWidth);
    out += '\n';
  }

  if (!anchoring.empty()) {
    out += "Anchoring (first vs final image, unit-norm embeddings)\n";
    auto row = [&](const char* label, auto cell) {
      out += fmt::format("{:<{}}", label, kLabelWidth);
      for (const auto& s : summaries) {
        auto it = std::find_if(anchoring.begin(), anchoring.end(),
                               [&](const AnchoringStats& a) { return a.condition == s.condition; });
        out += fmt::format("{:>{}}", it == anchoring.end() ? std::string("-") : cell(*it), kCellWidth);
      }
      out += '\n';
    };
    row("Anchoring distance (L2)", [](const AnchoringStats& a) { return fmt::format("{:.2f}({})", a.distance.mean, std::llround(a.distance.sd * 100.0)); });
    row("Anchoring similarity (cosine)", [](const AnchoringStats& a) { return fmt::format("{:.2f}({})", a.cosine.mean, std::llround(a.cosine.sd * 100.0)); });
    row("Between-session spread (mean pairwise L2)", [](const AnchoringStats& a) {
      return a.spread ? fmt::format("{:.2f}", *a.spread) : std::string("-");
    });
  }

  if (usage) {
    out += "Stage usage\n";
    out += fmt::format("{:<{}}{:>{}}{:>{}}\n", "Stage", kLabelWidth, "% actions", kCellWidth, "% adoption", kCellWidth);
    for (StageId s : kAllStages) {
      out += fmt::format("{:<{}}{:>{}.1f}{:>{}.1f}\n", stage_name(s), kLabelWidth, usage->action_share.at(s),
                         kCellWidth, usage->adoption.at(s), kCellWidth);
    }
    out += fmt::format("{:<{}}{:>{}.1f}\n", "Revisit rate (% sessions)", kLabelWidth, usage->revisit_rate, kCellWidth);
    out += fmt::format("{:<{}}{:>{}.1f}\n", "Skip rate (% sessions)", kLabelWidth, usage->skip_rate, kCellWidth);
  }
  return out;
}

std::string rows_to_csv(std::span<const MetricsRow> rows) {
  std::string out = "session_id,condition,actions";
  for (Metric m : kAllMetrics) out += fmt::format(",{}", metric_key(m));
  out += '\n';
  for (const auto& r : rows) {
    out += fmt::format("{},{},{}", csv_field(r.session_id), csv_field(r.condition), r.actions);
    for (Metric m : kAllMetrics) out += fmt::format(",{:.17g}", metric_value(r, m));
    out += '\n';
  }
  return out;
}

}  // namespace creo::metrics
