#pragma once

#include <optional>
#include <string>
#include <vector>

#include "axswap/metrics.hpp"
#include "axswap/model.hpp"
#include "axswap/policy.hpp"

namespace axswap {

/// Tuning objectives. The first five are component-level (all lower-better);
/// the last three score whole application runs.
enum class ObjectiveId { MAE, WCE, ARE, MSE, EP, SSIM, AppARE, MissRate };

bool objective_is_component(ObjectiveId id);
bool objective_higher_is_better(ObjectiveId id);
std::string objective_name(ObjectiveId id);
std::optional<ObjectiveId> objective_from_name(const std::string& name);
double extract_objective(const ErrorReport& report, ObjectiveId id);

/// One candidate of a component sweep: its policy (absent = NoSwap) and the
/// full metric report over the swept input space.
struct SweepRow {
  std::optional<SwapPolicy> policy;
  ErrorReport report;
};

/// All 4M+1 candidates (NoSwap first, then A/B x bit x trigger in tie-break
/// order), each evaluated over the full 2^(2M) input space.
std::vector<SweepRow> sweep_component(const MultiplierModel& model, unsigned threads = 0);

/// The 4M+1 candidate policies in deterministic order (NoSwap first).
std::vector<std::optional<SwapPolicy>> candidate_policies(int width);

struct TuningRow {
  std::optional<SwapPolicy> policy;
  double metric = 0.0;
};

struct TuningResult {
  ObjectiveId objective = ObjectiveId::MAE;
  std::optional<SwapPolicy> best_policy;  // absent = NoSwap wins
  double best_metric = 0.0;
  double noswap_metric = 0.0;
  std::vector<TuningRow> table;  // exactly 4M + 1 rows

  /// Relative improvement of best vs NoSwap in percent (0 when NoSwap is 0).
  double reduction_pct() const;
  /// Relative improvement of an arbitrary candidate value vs NoSwap.
  double reduction_pct_of(double metric) const;

  std::string to_json_string(int indent = -1) const;
  static TuningResult from_json_string(const std::string& text);
  std::string to_csv() const;
};

/// Exhaustive component-level tuning: every single-bit policy plus NoSwap over
/// all 2^(2M) pairs, argmin of the objective. Ties prefer NoSwap, then the
/// smallest policy in (operand, bit, trigger) order.
TuningResult tune_component(const MultiplierModel& model, ObjectiveId objective, unsigned threads = 0);

/// Selects the best candidate from precomputed sweep rows (same tie-breaks).
TuningResult select_best(const std::vector<SweepRow>& rows, ObjectiveId objective);

enum class HeatmapMode { NoSwap, Policy, Oracle };

/// 2^M x 2^M grid of absolute errors, row-major H[a][b], for the
/// policy-transformed (or oracle-chosen) evaluation at original pair (a, b).
/// Guarded at width <= 10.
std::vector<u64> heatmap(const MultiplierModel& model, HeatmapMode mode,
                         const std::optional<SwapPolicy>& policy = std::nullopt);

}  // namespace axswap
