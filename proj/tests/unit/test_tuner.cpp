#include <doctest.h>

#include <json.hpp>

#include "axswap/tuner.hpp"

using namespace axswap;

TEST_CASE("policy application reads the original operands") {
  const SwapPolicy b6_low{Operand::B, 6, 0};
  CHECK(apply_policy(b6_low, 5, 64, 8) == RawPair{5, 64});  // bit 6 of 64 is 1
  CHECK(apply_policy(b6_low, 5, 3, 8) == RawPair{3, 5});    // bit 6 of 3 is 0
  const SwapPolicy a0_high{Operand::A, 0, 1};
  CHECK(apply_policy(a0_high, 0, 200, 8) == RawPair{0, 200});
  CHECK_THROWS_AS(apply_policy(SwapPolicy{Operand::A, 8, 0}, 1, 2, 8), std::invalid_argument);
}

TEST_CASE("the decision bit read before application determines the orientation") {
  SplitMix64 rng(77);
  for (int i = 0; i < 1000; ++i) {
    const u32 a = static_cast<u32>(rng.below(256)), b = static_cast<u32>(rng.below(256));
    const SwapPolicy p{rng.below(2) ? Operand::A : Operand::B, static_cast<int>(rng.below(8)),
                       static_cast<int>(rng.below(2))};
    const u32 decision_word = p.operand == Operand::A ? a : b;
    const bool fired = static_cast<int>(decision_word >> p.bit_index & 1) == p.trigger_value;
    const RawPair out = apply_policy_unchecked(p, a, b);
    CHECK(out == (fired ? RawPair{b, a} : RawPair{a, b}));
  }
}

TEST_CASE("candidate set has 4M+1 entries in tie-break order") {
  const auto cands = candidate_policies(8);
  CHECK(cands.size() == 33);
  CHECK_FALSE(cands[0].has_value());
  for (std::size_t i = 2; i < cands.size(); ++i) CHECK(*cands[i - 1] < *cands[i]);
}

TEST_CASE("tuning an exact model reports NoSwap with zero error") {
  const auto model = MultiplierModel::exact(4, Signedness::Unsigned);
  const auto result = tune_component(model, ObjectiveId::MAE);
  CHECK_FALSE(result.best_policy.has_value());
  CHECK(result.best_metric == 0.0);
  CHECK(result.noswap_metric == 0.0);
  CHECK(result.reduction_pct() == 0.0);
  CHECK(result.table.size() == 17);
}

TEST_CASE("M=2 truncation golden tuning table") {
  // frozen from an exhaustive 9-candidate x 16-pair brute force:
  // noswap sum_abs = 12; best policies tie at 8, tie-break picks A:0:0
  const auto model = MultiplierModel::truncate_operand(2, Signedness::Unsigned, Operand::B, 1);
  const auto result = tune_component(model, ObjectiveId::MAE);
  CHECK(result.table.size() == 9);
  CHECK(result.noswap_metric == doctest::Approx(12.0 / 16.0));
  CHECK(result.best_metric == doctest::Approx(8.0 / 16.0));
  REQUIRE(result.best_policy.has_value());
  CHECK(*result.best_policy == SwapPolicy{Operand::A, 0, 0});
  CHECK(result.reduction_pct() == doctest::Approx(100.0 * (12.0 - 8.0) / 12.0));

  // frozen per-candidate sums in candidate order
  const double expected_sums[9] = {12, 8, 16, 16, 8, 16, 8, 8, 16};
  for (int i = 0; i < 9; ++i) CHECK(result.table[static_cast<size_t>(i)].metric == doctest::Approx(expected_sums[i] / 16.0));
}

TEST_CASE("unsupported objective is rejected") {
  const auto model = MultiplierModel::exact(4, Signedness::Unsigned);
  CHECK_THROWS_AS(tune_component(model, ObjectiveId::SSIM), std::invalid_argument);
}

TEST_CASE("tuning result JSON and CSV round trip") {
  const auto model = MultiplierModel::truncate_operand(4, Signedness::Unsigned, Operand::B, 2);
  const auto result = tune_component(model, ObjectiveId::MSE);
  const auto parsed = TuningResult::from_json_string(result.to_json_string(2));
  CHECK(parsed.objective == result.objective);
  CHECK(parsed.best_policy == result.best_policy);
  CHECK(parsed.best_metric == result.best_metric);
  CHECK(parsed.table.size() == result.table.size());

  const std::string csv = result.to_csv();
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 17);  // header + 4M+1 rows
  CHECK(csv.starts_with("operand,bit,trigger,metric,reduction_pct\nnoswap,,"));
}

TEST_CASE("ordering chain holds for sampled non-commutative models at M=6") {
  SplitMix64 rng(555);
  for (int trial = 0; trial < 6; ++trial) {
    const int k = 1 + static_cast<int>(rng.below(5));
    const auto s = rng.below(2) ? Signedness::Signed : Signedness::Unsigned;
    const auto which = rng.below(2) ? Operand::A : Operand::B;
    const auto model = MultiplierModel::truncate_operand(6, s, which, k);
    const auto oracle = oracle_report(model, PairSource::full_space());
    const auto rows = sweep_component(model);
    u128 best_sum = rows.front().report.sum_abs_err;
    for (const auto& row : rows) best_sum = std::min(best_sum, row.report.sum_abs_err);
    CHECK(oracle.sum_abs_err <= best_sum);
    CHECK(best_sum <= rows.front().report.sum_abs_err);
  }
}

TEST_CASE("commutative models tie every candidate") {
  const auto exact = MultiplierModel::exact(5, Signedness::Unsigned);
  const auto rows = sweep_component(exact);
  for (const auto& row : rows) CHECK(row.report == rows.front().report);
}

TEST_CASE("heatmaps") {
  const auto exact = MultiplierModel::exact(6, Signedness::Unsigned);
  const auto zero_grid = heatmap(exact, HeatmapMode::NoSwap);
  CHECK(std::all_of(zero_grid.begin(), zero_grid.end(), [](u64 v) { return v == 0; }));

  const auto model = MultiplierModel::truncate_operand(6, Signedness::Unsigned, Operand::B, 2);
  const u32 side = 64;

  // oracle heatmap is symmetric for every model
  const auto oracle_grid = heatmap(model, HeatmapMode::Oracle);
  for (u32 a = 0; a < side; ++a)
    for (u32 b = 0; b < side; ++b) REQUIRE(oracle_grid[a * side + b] == oracle_grid[b * side + a]);

  // policy heatmap matches a direct per-pair computation
  const SwapPolicy p{Operand::B, 3, 0};
  const auto pol_grid = heatmap(model, HeatmapMode::Policy, p);
  for (u32 a = 0; a < side; ++a)
    for (u32 b = 0; b < side; ++b) {
      const RawPair eff = apply_policy_unchecked(p, a, b);
      const i64 err = model.product_value(model.evaluate(eff.a, eff.b)) - model.exact_product(a, b);
      REQUIRE(pol_grid[a * side + b] == static_cast<u64>(err < 0 ? -err : err));
    }

  CHECK_THROWS_AS(heatmap(MultiplierModel::exact(12, Signedness::Unsigned), HeatmapMode::NoSwap), CapacityError);
  CHECK_THROWS_AS(heatmap(model, HeatmapMode::Policy), std::invalid_argument);
}

TEST_CASE("commutative-model heatmap equals its transpose") {
  SplitMix64 rng(8);
  std::vector<std::pair<int, int>> dropped;
  for (int r = 0; r < 6; ++r)
    for (int c = r; c < 6; ++c)
      if (rng.below(3) == 0) {
        dropped.emplace_back(r, c);
        if (r != c) dropped.emplace_back(c, r);
      }
  const auto model =
      MultiplierModel::drop_partial_products(6, Signedness::Unsigned, PartialProductMask(6, dropped));
  const auto grid = heatmap(model, HeatmapMode::NoSwap);
  for (u32 a = 0; a < 64; ++a)
    for (u32 b = 0; b < 64; ++b) REQUIRE(grid[a * 64 + b] == grid[b * 64 + a]);
}

TEST_CASE("heatmap totals agree with the metric accumulators") {
  // two routes to the same numbers: the error grid summed cell-by-cell must
  // reproduce the report's integer accumulators
  SplitMix64 rng(606);
  for (int trial = 0; trial < 4; ++trial) {
    const auto s = rng.below(2) ? Signedness::Signed : Signedness::Unsigned;
    const auto model = MultiplierModel::truncate_operand(6, s, rng.below(2) ? Operand::A : Operand::B,
                                                         1 + static_cast<int>(rng.below(5)));
    const std::optional<SwapPolicy> policy =
        trial % 2 ? std::optional<SwapPolicy>{SwapPolicy{Operand::B, static_cast<int>(rng.below(6)),
                                                         static_cast<int>(rng.below(2))}}
                  : std::nullopt;
    const auto grid = heatmap(model, policy ? HeatmapMode::Policy : HeatmapMode::NoSwap, policy);
    const auto report = component_metrics(model, policy, PairSource::full_space());
    u128 sum = 0;
    u64 max = 0, nonzero = 0;
    for (u64 v : grid) {
      sum += v;
      max = std::max(max, v);
      nonzero += v != 0;
    }
    CHECK(sum == report.sum_abs_err);
    CHECK(max == report.wce);
    CHECK(nonzero == report.err_count);

    const auto oracle_grid = heatmap(model, HeatmapMode::Oracle);
    const auto oracle = oracle_report(model, PairSource::full_space());
    u128 osum = 0;
    for (u64 v : oracle_grid) osum += v;
    CHECK(osum == oracle.sum_abs_err);
  }
}

TEST_CASE("component tuning evaluates exactly (4M+1) * 2^(2M) stimulations") {
  const auto model = MultiplierModel::truncate_operand(4, Signedness::Unsigned, Operand::B, 1);
  EvalCounterGuard guard;
  tune_component(model, ObjectiveId::MAE, 1);
  CHECK(guard.count() == u64{17} * 256);
}
