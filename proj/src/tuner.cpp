#include "axswap/tuner.hpp"

#include <algorithm>
#include <sstream>

#include <json.hpp>

namespace axswap {

bool objective_is_component(ObjectiveId id) { return id <= ObjectiveId::EP; }

bool objective_higher_is_better(ObjectiveId id) { return id == ObjectiveId::SSIM; }

std::string objective_name(ObjectiveId id) {
  switch (id) {
    case ObjectiveId::MAE: return "mae";
    case ObjectiveId::WCE: return "wce";
    case ObjectiveId::ARE: return "are";
    case ObjectiveId::MSE: return "mse";
    case ObjectiveId::EP: return "ep";
    case ObjectiveId::SSIM: return "ssim";
    case ObjectiveId::AppARE: return "appare";
    case ObjectiveId::MissRate: return "missrate";
  }
  return "?";
}

std::optional<ObjectiveId> objective_from_name(const std::string& name) {
  for (ObjectiveId id : {ObjectiveId::MAE, ObjectiveId::WCE, ObjectiveId::ARE, ObjectiveId::MSE, ObjectiveId::EP,
                         ObjectiveId::SSIM, ObjectiveId::AppARE, ObjectiveId::MissRate})
    if (objective_name(id) == name) return id;
  return std::nullopt;
}

double extract_objective(const ErrorReport& r, ObjectiveId id) {
  switch (id) {
    case ObjectiveId::MAE: return r.mae();
    case ObjectiveId::WCE: return static_cast<double>(r.wce);
    case ObjectiveId::ARE: return r.are();
    case ObjectiveId::MSE: return r.mse();
    case ObjectiveId::EP: return r.ep();
    default: throw std::invalid_argument("not a component objective: " + objective_name(id));
  }
}

std::vector<std::optional<SwapPolicy>> candidate_policies(int width) {
  std::vector<std::optional<SwapPolicy>> out;
  out.reserve(static_cast<std::size_t>(4 * width + 1));
  out.emplace_back(std::nullopt);
  for (Operand op : {Operand::A, Operand::B})
    for (int bit = 0; bit < width; ++bit)
      for (int trig : {0, 1}) out.emplace_back(SwapPolicy{op, bit, trig});
  return out;
}

std::vector<SweepRow> sweep_component(const MultiplierModel& model, unsigned threads) {
  std::vector<SweepRow> rows;
  for (const auto& policy : candidate_policies(model.width()))
    rows.push_back({policy, component_metrics(model, policy, PairSource::full_space(), threads)});
  return rows;
}

namespace {

// Integer comparison where the accumulators allow it; doubles only for ARE.
// candidate-vs-candidate reports always share n and are_excluded.
int compare_objective(const ErrorReport& x, const ErrorReport& y, ObjectiveId id) {
  auto cmp = [](auto a, auto b) { return a < b ? -1 : (a > b ? 1 : 0); };
  switch (id) {
    case ObjectiveId::MAE: return cmp(x.sum_abs_err, y.sum_abs_err);
    case ObjectiveId::WCE: return cmp(x.wce, y.wce);
    case ObjectiveId::ARE: return cmp(x.are_sum, y.are_sum);
    case ObjectiveId::MSE: return cmp(x.sum_sq_err, y.sum_sq_err);
    case ObjectiveId::EP: return cmp(x.err_count, y.err_count);
    default: throw std::invalid_argument("not a component objective");
  }
}

}  // namespace

TuningResult select_best(const std::vector<SweepRow>& rows, ObjectiveId objective) {
  if (!objective_is_component(objective)) throw std::invalid_argument("unsupported tuning objective");
  if (rows.empty() || rows.front().policy) throw std::invalid_argument("sweep rows must start with NoSwap");
  TuningResult result;
  result.objective = objective;
  result.noswap_metric = extract_objective(rows.front().report, objective);
  std::size_t best = 0;
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (compare_objective(rows[i].report, rows[best].report, objective) < 0) best = i;
  result.best_policy = rows[best].policy;
  result.best_metric = extract_objective(rows[best].report, objective);
  for (const SweepRow& r : rows) result.table.push_back({r.policy, extract_objective(r.report, objective)});
  return result;
}

TuningResult tune_component(const MultiplierModel& model, ObjectiveId objective, unsigned threads) {
  if (!objective_is_component(objective)) throw std::invalid_argument("unsupported tuning objective");
  return select_best(sweep_component(model, threads), objective);
}

double TuningResult::reduction_pct_of(double metric) const {
  if (noswap_metric == 0.0) return 0.0;
  const double rel = (noswap_metric - metric) / noswap_metric;
  return 100.0 * (objective_higher_is_better(objective) ? -rel : rel);
}

double TuningResult::reduction_pct() const { return reduction_pct_of(best_metric); }

namespace {

nlohmann::json policy_to_json(const std::optional<SwapPolicy>& p) {
  if (!p) return nullptr;
  return nlohmann::json{{"operand", p->operand == Operand::A ? "A" : "B"},
                        {"bit", p->bit_index},
                        {"trigger", p->trigger_value}};
}

std::optional<SwapPolicy> policy_from_json(const nlohmann::json& j) {
  if (j.is_null()) return std::nullopt;
  SwapPolicy p;
  p.operand = j.at("operand").get<std::string>() == "A" ? Operand::A : Operand::B;
  p.bit_index = j.at("bit").get<int>();
  p.trigger_value = j.at("trigger").get<int>();
  return p;
}

}  // namespace

std::string TuningResult::to_json_string(int indent) const {
  nlohmann::json rows = nlohmann::json::array();
  for (const TuningRow& r : table)
    rows.push_back({{"policy", policy_to_json(r.policy)},
                    {"metric", r.metric},
                    {"reduction_pct", reduction_pct_of(r.metric)}});
  nlohmann::json j{{"objective", objective_name(objective)},
                   {"best_policy", policy_to_json(best_policy)},
                   {"best_metric", best_metric},
                   {"noswap_metric", noswap_metric},
                   {"reduction_pct", reduction_pct()},
                   {"table", rows}};
  return j.dump(indent);
}

TuningResult TuningResult::from_json_string(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  TuningResult r;
  const auto obj = objective_from_name(j.at("objective").get<std::string>());
  if (!obj) throw FormatError("unknown objective in tuning result");
  r.objective = *obj;
  r.best_policy = policy_from_json(j.at("best_policy"));
  r.best_metric = j.at("best_metric").get<double>();
  r.noswap_metric = j.at("noswap_metric").get<double>();
  for (const auto& row : j.at("table"))
    r.table.push_back({policy_from_json(row.at("policy")), row.at("metric").get<double>()});
  return r;
}

std::string TuningResult::to_csv() const {
  std::ostringstream os;
  os.precision(17);
  os << "operand,bit,trigger,metric,reduction_pct\n";
  for (const TuningRow& r : table) {
    if (r.policy)
      os << (r.policy->operand == Operand::A ? 'A' : 'B') << ',' << r.policy->bit_index << ','
         << r.policy->trigger_value;
    else
      os << "noswap,,";
    os << ',' << r.metric << ',' << reduction_pct_of(r.metric) << '\n';
  }
  return os.str();
}

std::vector<u64> heatmap(const MultiplierModel& model, HeatmapMode mode, const std::optional<SwapPolicy>& policy) {
  const int m = model.width();
  if (m > 10) throw CapacityError("heatmap limited to width <= 10");
  if (mode == HeatmapMode::Policy) {
    if (!policy) throw std::invalid_argument("policy heatmap requires a policy");
    apply_policy(*policy, 0, 0, m);
  }
  const u32 side = static_cast<u32>(model.operand_count());
  std::vector<u64> grid(static_cast<std::size_t>(side) * side);
  for (u32 a = 0; a < side; ++a) {
    for (u32 b = 0; b < side; ++b) {
      const i64 precise = model.exact_product(a, b);
      u64 err;
      if (mode == HeatmapMode::Oracle) {
        const i64 d1 = model.product_value(model.evaluate(a, b)) - precise;
        const i64 d2 = model.product_value(model.evaluate(b, a)) - precise;
        err = std::min<u64>(static_cast<u64>(d1 < 0 ? -d1 : d1), static_cast<u64>(d2 < 0 ? -d2 : d2));
      } else {
        const RawPair eff = mode == HeatmapMode::Policy ? apply_policy_unchecked(*policy, a, b) : RawPair{a, b};
        const i64 d = model.product_value(model.evaluate(eff.a, eff.b)) - precise;
        err = static_cast<u64>(d < 0 ? -d : d);
      }
      grid[static_cast<std::size_t>(a) * side + b] = err;
    }
  }
  return grid;
}

}  // namespace axswap
