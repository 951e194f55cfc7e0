#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "creo/core/raster.hpp"
#include "creo/core/types.hpp"

namespace creo::metrics {

enum class ActionType { kConstruct, kEvaluate, kGenerate, kRefine, kRepair };
enum class Intent { kOnIntent, kPivot, kDrift };
enum class Agency { kUserDriven, kModelLed };

std::string_view action_type_name(ActionType t);
std::string_view intent_name(Intent i);
std::string_view agency_name(Agency a);

struct ActionRecord {
  std::string session_id;
  std::string condition;
  std::int64_t index = 0;
  ActionType action_type = ActionType::kConstruct;
  Intent intent = Intent::kOnIntent;
  Agency agency = Agency::kUserDriven;
  bool direction_change = false;
  bool invariant_violation = false;
  std::int64_t iteration_id = 0;
  std::optional<StageId> stage;
};

// Strict NDJSON parser; blank lines are skipped, anything else malformed
// fails the whole input with its 1-based line number.
std::vector<ActionRecord> parse_action_log(std::string_view text);

// Splits records by session (first-appearance order), checking index order.
std::vector<std::vector<ActionRecord>> group_sessions(std::span<const ActionRecord> records);

struct MetricsRow {
  std::string session_id;
  std::string condition;
  std::int64_t actions = 0;
  double direction_changes = 0;
  double breadth = 0;
  double drift_pct = 0;
  double pivot_pct = 0;
  double construct_pct = 0;
  double evaluate_pct = 0;
  double generate_pct = 0;
  double refine_pct = 0;
  double repair_pct = 0;
  double agency_pct = 0;
  double violation_pct = 0;
  double revision_burden = 0;
};

MetricsRow session_metrics(std::span<const ActionRecord> records);

enum class Metric {
  kDirectionChanges,
  kBreadth,
  kDrift,
  kPivot,
  kConstruct,
  kEvaluate,
  kAgency,
  kRevisionBurden,
  kViolation,
  kGenerate,
  kRefine,
  kRepair,
};
inline constexpr std::array<Metric, 12> kAllMetrics = {
    Metric::kDirectionChanges, Metric::kBreadth,        Metric::kDrift,     Metric::kPivot,
    Metric::kConstruct,        Metric::kEvaluate,       Metric::kAgency,    Metric::kRevisionBurden,
    Metric::kViolation,        Metric::kGenerate,       Metric::kRefine,    Metric::kRepair};

std::string_view metric_key(Metric m);  // CSV / JSON column name
double metric_value(const MetricsRow& row, Metric m);

struct Stat {
  double mean = 0;
  double sd = 0;
};

struct ConditionSummary {
  std::string condition;
  std::size_t sessions = 0;
  std::map<Metric, Stat> stats;
};

// Mean and sample sd (n - 1; 0 when n = 1) per metric over session rows.
Stat mean_sd(std::vector<double> values);
ConditionSummary aggregate_condition(std::span<const MetricsRow> rows);

// "1.6(10)": mean to one decimal, sd in units of that last digit.
std::string format_cell(const Stat& s);

// Embeddings.
using Embedding = std::vector<double>;

class Embedder {
 public:
  virtual ~Embedder() = default;
  virtual Embedding embed(const Raster& image) const = 0;
};

// 8x8 box-downsampled luminance (64) + intensity-weighted 8-bin histogram per
// channel (24), L2-normalized.
Embedding toy_embed(const Raster& image);

class ToyEmbedder final : public Embedder {
 public:
  Embedding embed(const Raster& image) const override { return toy_embed(image); }
};

double l2_distance(const Embedding& a, const Embedding& b);
double cosine_similarity(const Embedding& a, const Embedding& b);
double anchoring_distance(const Raster& first, const Raster& last, const Embedder& embedder);
double homogenization_spread(std::span<const Embedding> embeddings);

struct SessionAnchoring {
  std::string session_id;
  std::string condition;
  double distance = 0;
  double cosine = 0;
  Embedding final_embedding;
};

struct AnchoringStats {
  std::string condition;
  Stat distance;
  Stat cosine;
  std::optional<double> spread;  // needs >= 2 sessions
};

std::vector<AnchoringStats> summarize_anchoring(std::span<const SessionAnchoring> sessions);

struct StageUsageReport {
  std::size_t sessions = 0;
  std::size_t actions = 0;
  std::map<StageId, double> action_share;  // % of actions
  std::map<StageId, double> adoption;      // % of sessions using the stage
  double revisit_rate = 0;                 // % of sessions that return to an earlier stage
  double skip_rate = 0;                    // % of sessions that bypass an earlier stage
};

StageUsageReport stage_usage_report(std::span<const ActionRecord> records);

// Text report with the table's row labels and "mean(sd)" cells, one column
// per condition (first-appearance order).
std::string format_report(std::span<const ConditionSummary> summaries, std::span<const AnchoringStats> anchoring = {},
                          const std::optional<StageUsageReport>& usage = std::nullopt);
std::string rows_to_csv(std::span<const MetricsRow> rows);

}  // namespace creo::metrics
