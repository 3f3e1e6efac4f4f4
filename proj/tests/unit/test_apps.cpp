#include <doctest.h>

#include <filesystem>

#include "axswap/apps.hpp"
#include "axswap/metrics.hpp"

using namespace axswap;

namespace {

// Plain integer Sobel, coded independently of the fixed-point pipeline.
GrayImage integer_sobel(const GrayImage& img) {
  GrayImage out = GrayImage::blank(img.width, img.height);
  for (int r = 1; r + 1 < img.height; ++r)
    for (int c = 1; c + 1 < img.width; ++c) {
      int gx = 0, gy = 0;
      static constexpr int kx[3][3] = {{-1, 0, 1}, {-2, 0, 2}, {-1, 0, 1}};
      static constexpr int ky[3][3] = {{-1, -2, -1}, {0, 0, 0}, {1, 2, 1}};
      for (int dr = -1; dr <= 1; ++dr)
        for (int dc = -1; dc <= 1; ++dc) {
          gx += kx[dr + 1][dc + 1] * img.at(r + dr, c + dc);
          gy += ky[dr + 1][dc + 1] * img.at(r + dr, c + dc);
        }
      out.at(r, c) = static_cast<u8>(std::clamp(std::abs(gx) + std::abs(gy), 0, 255));
    }
  return out;
}

}  // namespace

TEST_CASE("sobel: constant image gives a zero interior") {
  const auto cfg = WideMulConfig::exact_baseline(16);
  const GrayImage img = GrayImage::blank(16, 12, 137);
  const GrayImage out = run_sobel(img, cfg);
  CHECK(std::all_of(out.pixels.begin(), out.pixels.end(), [](u8 v) { return v == 0; }));
  CHECK_THROWS_AS(run_sobel(GrayImage::blank(2, 8), cfg), std::invalid_argument);
}

TEST_CASE("sobel: exact substrate equals the independent integer reference") {
  const auto cfg = WideMulConfig::exact_baseline(16);
  GrayImage img = GrayImage::blank(24, 24);
  // vertical step edge plus some texture
  SplitMix64 rng(10);
  for (int r = 0; r < 24; ++r)
    for (int c = 0; c < 24; ++c) img.at(r, c) = static_cast<u8>((c >= 12 ? 200 : 30) + rng.below(16));
  const GrayImage fx_out = run_sobel(img, cfg);
  const GrayImage int_out = integer_sobel(img);
  const GrayImage ref_out = sobel_reference(img);
  CHECK(fx_out == int_out);
  CHECK(fx_out == ref_out);

  // the maximal-response column sits on the step edge
  u64 col_sum[24] = {};
  for (int r = 1; r < 23; ++r)
    for (int c = 1; c < 23; ++c) col_sum[c] += fx_out.at(r, c);
  const int peak = static_cast<int>(std::max_element(std::begin(col_sum), std::end(col_sum)) - std::begin(col_sum));
  CHECK((peak == 11 || peak == 12));
}

TEST_CASE("kmeans: an image with exactly k distinct colors is a fixed point") {
  const auto cfg = WideMulConfig::exact_baseline(16);
  RgbImage img = RgbImage::blank(16, 16);
  static constexpr u8 colors[5][3] = {{250, 10, 10}, {10, 250, 10}, {10, 10, 250}, {250, 250, 10}, {30, 30, 30}};
  for (int r = 0; r < 16; ++r)
    for (int c = 0; c < 16; ++c)
      for (int ch = 0; ch < 3; ++ch) img.px(r, c)[ch] = colors[(r / 4 + c / 4) % 5][ch];
  const RgbImage out = run_kmeans(img, 5, 10, 42, cfg);
  CHECK(out == img);
  const RgbImage ref = kmeans_reference(img, 5, 10, 42);
  CHECK(ref == img);
}

TEST_CASE("kmeans: degenerate k > distinct colors still terminates deterministically") {
  const auto cfg = WideMulConfig::exact_baseline(16);
  RgbImage img = RgbImage::blank(8, 8);
  for (std::size_t i = 0; i < img.pixels.size(); i += 3) img.pixels[i] = 200;  // single distinct color
  const RgbImage out1 = run_kmeans(img, 5, 10, 1, cfg);
  const RgbImage out2 = run_kmeans(img, 5, 10, 1, cfg);
  CHECK(out1 == out2);
  CHECK(out1 == img);  // every pixel maps to a centroid equal to the single color
}

TEST_CASE("fft: impulse gives a flat unit spectrum under the exact substrate") {
  const auto cfg = WideMulConfig::exact_baseline(16);
  std::vector<FxComplex> sig(64, FxComplex{Fx32{0}, Fx32{0}});
  sig[0] = {fx_from_real(1.0), Fx32{0}};
  const auto out = run_fft(sig, cfg);
  for (const FxComplex& bin : out) {
    CHECK(bin.re.raw == 65536);
    CHECK(bin.im.raw == 0);
  }
  std::vector<FxComplex> bad(63);
  CHECK_THROWS_AS(run_fft(bad, cfg), std::invalid_argument);
}

TEST_CASE("fft: linearity defect of the exact substrate is bounded per stage") {
  // each truncating twiddle multiplication adds at most one ulp of linearity
  // defect and at most doubles the incoming one, so after s stages the defect
  // is below 2^s - 1 ulp; with exact twiddles (N = 4: only 1 and -i) it is 0
  const auto cfg = WideMulConfig::exact_baseline(16);
  auto max_defect_ulp = [&](std::size_t n, u64 seed) {
    SplitMix64 rng(seed);
    std::vector<FxComplex> x(n), y(n), sum(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = {fx_from_real(rng.unit() - 0.5), fx_from_real(rng.unit() - 0.5)};
      y[i] = {fx_from_real(rng.unit() - 0.5), fx_from_real(rng.unit() - 0.5)};
      sum[i] = {fx_add(x[i].re, y[i].re), fx_add(x[i].im, y[i].im)};
    }
    const auto fx_sum = run_fft(sum, cfg);
    const auto fx_x = run_fft(x, cfg);
    const auto fx_y = run_fft(y, cfg);
    i32 max_ulp = 0;
    for (std::size_t i = 0; i < n; ++i) {
      max_ulp = std::max(max_ulp, std::abs(fx_sum[i].re.raw - (fx_x[i].re.raw + fx_y[i].re.raw)));
      max_ulp = std::max(max_ulp, std::abs(fx_sum[i].im.raw - (fx_x[i].im.raw + fx_y[i].im.raw)));
    }
    return max_ulp;
  };
  CHECK(max_defect_ulp(4, 500) == 0);
  CHECK(max_defect_ulp(256, 501) <= (1 << 8) - 1);
  CHECK(max_defect_ulp(1024, 502) <= (1 << 10) - 1);
}

TEST_CASE("datasets are deterministic, disjoint, and hash-stable") {
  const Dataset train = generate_dataset(DatasetKind::Train, 1);
  const Dataset train2 = generate_dataset(DatasetKind::Train, 1);
  CHECK(dataset_manifest_json(train) == dataset_manifest_json(train2));
  CHECK(train.gray_images.size() == train2.gray_images.size());
  for (std::size_t i = 0; i < train.gray_images.size(); ++i)
    CHECK(train.gray_images[i].second == train2.gray_images[i].second);

  const Dataset test = generate_dataset(DatasetKind::Test, 1);
  for (const auto& [tn, ti] : train.gray_images)
    for (const auto& [sn, si] : test.gray_images) {
      CHECK(tn != sn);
      CHECK(ti != si);
    }
  for (const auto& [tn, ti] : train.color_images)
    for (const auto& [sn, si] : test.color_images) CHECK(ti != si);
  for (const auto& [tn, ts] : train.signals)
    for (const auto& [sn, ss] : test.signals) CHECK(ts != ss);

  const Dataset other_seed = generate_dataset(DatasetKind::Train, 2);
  CHECK(dataset_manifest_hash(train) != dataset_manifest_hash(other_seed));
}

TEST_CASE("dataset round-trips through the filesystem") {
  const Dataset ds = generate_dataset(DatasetKind::Test, 7);
  const auto dir = std::filesystem::temp_directory_path() / "axswap_ds_roundtrip";
  std::filesystem::remove_all(dir);
  write_dataset(ds, dir);
  const Dataset loaded = load_dataset(dir);
  CHECK(dataset_manifest_json(loaded) == dataset_manifest_json(ds));
  CHECK(loaded.gray_images.size() == ds.gray_images.size());
  CHECK(loaded.color_images.size() == ds.color_images.size());
  CHECK(loaded.signals.size() == ds.signals.size());
  for (std::size_t i = 0; i < ds.signals.size(); ++i) CHECK(loaded.signals[i].second == ds.signals[i].second);
  std::filesystem::remove_all(dir);
}

TEST_CASE("exact configuration is policy-independent on every benchmark") {
  const auto cfg = WideMulConfig::exact_baseline(16);
  const Dataset ds = generate_dataset(DatasetKind::Test, 3);
  const SwapPolicy p{Operand::B, 7, 1};
  for (BenchmarkId id : {BenchmarkId::Sobel, BenchmarkId::Kmeans, BenchmarkId::Fft}) {
    const double base = score_benchmark(id, ds, cfg);
    CHECK(score_benchmark(id, ds, cfg, p) == base);
    CHECK(score_benchmark(id, ds, cfg, OracleTag{}) == base);
  }
}

TEST_CASE("sobel application tuning golden result") {
  // frozen from an exhaustive 65-candidate sweep on the seed-1 train set:
  // the winning rule swaps whenever bit 15 of operand A reads 0, which moves
  // the wide data word onto the truncated sub-multiplier port
  const auto model = MultiplierModel::truncate_operand(16, Signedness::Signed, Operand::B, 6);
  const auto cfg = WideMulConfig::uniform(model, ApproxSet::MdLo, ShiftMode::Fidelity);
  const Dataset train = generate_dataset(DatasetKind::Train, 1);
  const auto result = tune_application(BenchmarkId::Sobel, cfg, ObjectiveId::SSIM, train);
  REQUIRE(result.best_policy.has_value());
  CHECK(*result.best_policy == SwapPolicy{Operand::A, 15, 0});
  CHECK(result.noswap_metric == doctest::Approx(0.10424410712046595).epsilon(1e-9));
  CHECK(result.best_metric == doctest::Approx(0.99994511695825306).epsilon(1e-9));
  CHECK(result.best_metric > result.noswap_metric);  // strict improvement
}

TEST_CASE("application tuning never selects below NoSwap on the train set") {
  const auto model = MultiplierModel::truncate_operand(16, Signedness::Signed, Operand::B, 9);
  const auto cfg = WideMulConfig::uniform(model, ApproxSet::MdLo, ShiftMode::Fidelity);
  const Dataset train = generate_dataset(DatasetKind::Train, 5);
  const auto result = tune_application(BenchmarkId::Fft, cfg, ObjectiveId::AppARE, train);
  CHECK(result.table.size() == 65);
  CHECK(result.best_metric <= result.noswap_metric);
  CHECK_THROWS_AS(tune_application(BenchmarkId::Fft, cfg, ObjectiveId::SSIM, train), std::invalid_argument);
}
