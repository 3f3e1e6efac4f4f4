#include <doctest.h>

#include <json.hpp>

#include "axswap/metrics.hpp"
#include "axswap/tuner.hpp"

using namespace axswap;

TEST_CASE("exact model has an all-zero report over the full 8-bit space") {
  const auto model = MultiplierModel::exact(8, Signedness::Unsigned);
  const auto r = component_metrics(model, std::nullopt, PairSource::full_space());
  CHECK(r.n == 65536);
  CHECK(r.sum_abs_err == 0);
  CHECK(r.wce == 0);
  CHECK(r.err_count == 0);
  CHECK(r.mae() == 0.0);
  CHECK(r.are() == 0.0);
}

TEST_CASE("M=2 truncation metrics match the closed-form counts") {
  // evaluate(a,b) = a*(b & ~1): sum |err| = (sum a)(sum b&1) = 6*2 = 12
  const auto model = MultiplierModel::truncate_operand(2, Signedness::Unsigned, Operand::B, 1);
  const auto r = component_metrics(model, std::nullopt, PairSource::full_space());
  CHECK(r.n == 16);
  CHECK(r.sum_abs_err == 12);
  CHECK(r.mae() == doctest::Approx(0.75));
  CHECK(r.wce == 3);
  CHECK(r.err_count == 6);
  CHECK(r.ep() == doctest::Approx(6.0 / 16.0));
  // zero-product pairs (a=0 or b=0) are excluded from ARE
  CHECK(r.are_excluded == 7);
  CHECK(r.n == r.are_excluded + (r.n - r.are_excluded));
}

TEST_CASE("policy transforms inputs while the reference stays the original pair") {
  const auto model = MultiplierModel::truncate_operand(8, Signedness::Unsigned, Operand::B, 2);
  const SwapPolicy always_b0{Operand::B, 0, 0};  // fires when B is even
  std::vector<RawPair> pairs{{7, 8}};            // swaps to (8, 7): approx = 8*4, precise = 56
  const auto r = component_metrics(model, always_b0, PairSource::pairs(pairs));
  CHECK(r.n == 1);
  CHECK(r.sum_abs_err == static_cast<u128>(56 - 32));
}

TEST_CASE("a never-firing policy reproduces the no-policy report") {
  const auto model = MultiplierModel::truncate_operand(8, Signedness::Unsigned, Operand::B, 3);
  // restrict pairs to those where bit 5 of B is 1; trigger 0 never fires
  std::vector<RawPair> pairs;
  SplitMix64 rng(99);
  while (pairs.size() < 500) {
    const u32 a = static_cast<u32>(rng.below(256)), b = static_cast<u32>(rng.below(256));
    if (b >> 5 & 1) pairs.push_back({a, b});
  }
  const SwapPolicy never{Operand::B, 5, 0};
  const auto with_policy = component_metrics(model, never, PairSource::pairs(pairs));
  const auto without = component_metrics(model, std::nullopt, PairSource::pairs(pairs));
  CHECK(with_policy == without);
}

TEST_CASE("reports are identical across thread counts") {
  const auto model = MultiplierModel::truncate_operand(8, Signedness::Signed, Operand::A, 4);
  const auto r1 = component_metrics(model, std::nullopt, PairSource::full_space(), 1);
  const auto r4 = component_metrics(model, std::nullopt, PairSource::full_space(), 4);
  CHECK(r1 == r4);
  CHECK(r1.are_sum == r4.are_sum);
}

TEST_CASE("mse >= mae^2 on random models") {
  SplitMix64 rng(31337);
  for (int trial = 0; trial < 12; ++trial) {
    const int k = 1 + static_cast<int>(rng.below(7));
    const auto which = rng.below(2) ? Operand::A : Operand::B;
    const auto s = rng.below(2) ? Signedness::Signed : Signedness::Unsigned;
    const auto model = MultiplierModel::truncate_operand(8, s, which, k);
    const auto r = component_metrics(model, std::nullopt, PairSource::full_space());
    CHECK(r.mse() >= r.mae() * r.mae() * (1.0 - 1e-12));
    CHECK(r.mae() <= static_cast<double>(r.wce));
  }
}

TEST_CASE("16-bit tuning smoke: one policy over a 2^24-pair slice") {
  // full 16-bit tuning is 65 * 2^32 stimulations; this exercises the same
  // machinery on a contiguous slice of the input space
  const auto model = MultiplierModel::truncate_operand(16, Signedness::Unsigned, Operand::B, 6);
  const SwapPolicy policy{Operand::B, 6, 0};
  const auto slice = PairSource::slice(u64{7} << 24, u64{1} << 24);
  const auto r = component_metrics(model, policy, slice);
  CHECK(r.n == u64{1} << 24);
  CHECK(r.wce > 0);
  CHECK(component_metrics(model, policy, slice, 1) == r);  // thread-count independent
}

TEST_CASE("empty pair source is rejected") {
  const auto model = MultiplierModel::exact(4, Signedness::Unsigned);
  CHECK_THROWS_AS(component_metrics(model, std::nullopt, PairSource::pairs({})), std::invalid_argument);
  CHECK_THROWS_AS(component_metrics(model, std::nullopt, PairSource::slice(250, 10)), std::invalid_argument);
}

TEST_CASE("oracle report for M=2 truncation matches the brute-force bound") {
  // min over orientations per pair: pairs (1,1),(1,3),(3,1) give 1, (3,3) gives 3
  const auto model = MultiplierModel::truncate_operand(2, Signedness::Unsigned, Operand::B, 1);
  const auto r = oracle_report(model, PairSource::full_space());
  CHECK(r.n == 16);
  CHECK(r.sum_abs_err == 6);
  CHECK(r.mae() == doctest::Approx(0.375));
}

TEST_CASE("oracle equals noswap for commutative models") {
  const auto model = MultiplierModel::exact(6, Signedness::Signed);
  CHECK(oracle_report(model, PairSource::full_space()) == component_metrics(model, std::nullopt, PairSource::full_space()));
}

TEST_CASE("error report serialization") {
  const auto model = MultiplierModel::truncate_operand(4, Signedness::Unsigned, Operand::B, 1);
  const auto r = component_metrics(model, std::nullopt, PairSource::full_space());
  const auto j = nlohmann::json::parse(r.to_json_string());
  CHECK(j.at("n").get<u64>() == 256);
  CHECK(j.at("sum_abs_err").is_string());
  CHECK(u128_from_string(j.at("sum_abs_err").get<std::string>()) == r.sum_abs_err);
  CHECK(j.at("mae").get<double>() == doctest::Approx(r.mae()));
  const std::string header = ErrorReport::csv_header();
  const std::string row = r.to_csv_row();
  CHECK(std::count(header.begin(), header.end(), ',') == std::count(row.begin(), row.end(), ','));
}

TEST_CASE("miss rate") {
  std::vector<u8> all_ok(10, 0), all_bad(10, 1);
  CHECK(miss_rate(all_ok) == 0.0);
  CHECK(miss_rate(all_bad) == 1.0);
  std::vector<u8> mixed{1, 1, 1, 0, 0, 0, 0, 0, 0, 0};
  CHECK(miss_rate(mixed) == doctest::Approx(0.3));
  CHECK_THROWS_AS(miss_rate({}), std::invalid_argument);
}

TEST_CASE("application ARE with the zero-denominator counting rule") {
  std::vector<double> same{1.0, -2.5, 3.0};
  CHECK(app_are(same, same) == 0.0);

  std::vector<double> approx{0.5, 1.0, -2.0};
  std::vector<double> zeros{0.0, 0.0, 0.0};
  CHECK(app_are(approx, zeros) == 1.0);
  std::vector<double> approx_zero{0.0, 0.0};
  std::vector<double> zeros2{0.0, 0.0};
  CHECK(app_are(approx_zero, zeros2) == 0.0);

  std::vector<double> scaled(same);
  for (double& v : scaled) v *= 1.1;
  CHECK(app_are(scaled, same) == doctest::Approx(0.1).epsilon(1e-12));

  std::vector<double> short_seq{1.0};
  CHECK_THROWS_AS(app_are(short_seq, same), std::invalid_argument);
}

TEST_CASE("gain vs noswap follows the orientation") {
  std::vector<double> noswap{0.5};
  std::vector<double> better{0.25};
  CHECK(gain_vs_noswap(better, noswap, MetricOrientation::LowerBetter) == doctest::Approx(0.5));
  CHECK(gain_vs_noswap(noswap, noswap, MetricOrientation::LowerBetter) == 0.0);
  // higher-better: SSIM rising from 0.5 to 0.75 is a +50% gain
  std::vector<double> ssim_up{0.75};
  CHECK(gain_vs_noswap(ssim_up, noswap, MetricOrientation::HigherBetter) == doctest::Approx(0.5));
  std::vector<double> zero{0.0};
  CHECK_THROWS_AS(gain_vs_noswap(better, zero, MetricOrientation::LowerBetter), std::domain_error);
}

TEST_CASE("ssim basics") {
  SplitMix64 rng(4242);
  std::vector<u8> img(64 * 64), other(64 * 64);
  for (auto& p : img) p = static_cast<u8>(rng.below(256));
  for (auto& p : other) p = static_cast<u8>(rng.below(256));

  CHECK(ssim(img, img, 64, 64) == doctest::Approx(1.0));
  CHECK(ssim(img, other, 64, 64) == doctest::Approx(ssim(other, img, 64, 64)));
  const double v = ssim(img, other, 64, 64);
  CHECK(v >= -1.0);
  CHECK(v <= 1.0);

  // inversion of a textured image drives the covariance negative
  std::vector<u8> inverted(img.size());
  for (std::size_t i = 0; i < img.size(); ++i) inverted[i] = static_cast<u8>(255 - img[i]);
  CHECK(ssim(img, inverted, 64, 64) < 0.0);

  std::vector<u8> small(16, 0);
  CHECK_THROWS_AS(ssim(small, small, 4, 4), std::invalid_argument);
  CHECK_THROWS_AS(ssim(img, small, 64, 64), std::invalid_argument);
}
