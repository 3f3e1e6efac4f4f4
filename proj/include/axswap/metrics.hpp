#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "axswap/model.hpp"
#include "axswap/policy.hpp"

namespace axswap {

/// Component-level error metrics over a set of operand pairs. Absolute and
/// squared errors and the error count are kept as exact integer accumulators;
/// division happens only in the accessors, so reports are bit-reproducible
/// across thread counts and chunk sizes. The relative-error sum skips pairs
/// whose precise product is zero and counts them in are_excluded.
struct ErrorReport {
  u64 n = 0;
  u128 sum_abs_err = 0;
  u128 sum_sq_err = 0;
  u64 wce = 0;
  u64 err_count = 0;
  double are_sum = 0.0;
  u64 are_excluded = 0;

  double mae() const { return n ? u128_to_double(sum_abs_err) / static_cast<double>(n) : 0.0; }
  double mse() const { return n ? u128_to_double(sum_sq_err) / static_cast<double>(n) : 0.0; }
  double ep() const { return n ? static_cast<double>(err_count) / static_cast<double>(n) : 0.0; }
  double are() const {
    const u64 counted = n - are_excluded;
    return counted ? are_sum / static_cast<double>(counted) : 0.0;
  }

  void add_sample(u64 abs_err, i64 precise) {
    ++n;
    sum_abs_err += abs_err;
    sum_sq_err += static_cast<u128>(abs_err) * abs_err;
    if (abs_err > wce) wce = abs_err;
    if (abs_err != 0) ++err_count;
    if (precise == 0)
      ++are_excluded;
    else if (abs_err != 0)
      are_sum += static_cast<double>(abs_err) / static_cast<double>(precise < 0 ? -precise : precise);
  }

  /// Chunk partials must be merged in chunk order so are_sum is deterministic.
  void merge(const ErrorReport& o) {
    n += o.n;
    sum_abs_err += o.sum_abs_err;
    sum_sq_err += o.sum_sq_err;
    if (o.wce > wce) wce = o.wce;
    err_count += o.err_count;
    are_sum += o.are_sum;
    are_excluded += o.are_excluded;
  }

  std::string to_json_string(int indent = -1) const;
  static std::string csv_header();
  std::string to_csv_row() const;

  friend bool operator==(const ErrorReport&, const ErrorReport&) = default;
};

/// Operand-pair source for metric evaluation: the full 2^(2M) space, a
/// contiguous index slice of it (pair index = (a_raw << M) | b_raw), or an
/// explicit pair list.
class PairSource {
 public:
  static PairSource full_space() { return PairSource{}; }
  static PairSource slice(u64 begin, u64 count) {
    PairSource s;
    s.slice_ = {begin, count};
    return s;
  }
  static PairSource pairs(std::vector<RawPair> v) {
    PairSource s;
    s.pairs_ = std::move(v);
    return s;
  }

  bool is_full_space() const { return !pairs_ && !slice_; }
  u64 size(const MultiplierModel& model) const;
  RawPair at(const MultiplierModel& model, u64 i) const;
  u64 index_offset() const { return slice_ ? slice_->first : 0; }
  const std::vector<RawPair>* explicit_pairs() const { return pairs_ ? &*pairs_ : nullptr; }

 private:
  PairSource() = default;
  std::optional<std::pair<u64, u64>> slice_;
  std::optional<std::vector<RawPair>> pairs_;
};

/// Metrics of `model` against the exact product. Each pair is transformed by
/// the policy (if any) before evaluation; the precise reference is always the
/// exact product of the ORIGINAL pair.
ErrorReport component_metrics(const MultiplierModel& model, const std::optional<SwapPolicy>& policy,
                              const PairSource& inputs, unsigned threads = 0);

/// Per-pair best-orientation bound: the absolute error is
/// min(|eval(a,b) - ab|, |eval(b,a) - ab|) and EP/ARE come from the chosen
/// orientation's output.
ErrorReport oracle_report(const MultiplierModel& model, const PairSource& inputs, unsigned threads = 0);

// Application-level metrics.

/// Mean SSIM between two equal-size 8-bit grayscale images: 8x8 uniform
/// sliding window (stride 1), L=255, k1=0.01, k2=0.03.
double ssim(std::span<const u8> img_a, std::span<const u8> img_b, int width, int height);

/// Wrong results over total executions.
double miss_rate(std::span<const u8> outcomes_wrong);

/// Mean relative error with the zero-denominator counting rule: a pair with
/// precise == 0 contributes 0 when approx == 0 and a full error of 1 otherwise.
double app_are(std::span<const double> approx, std::span<const double> precise);

enum class MetricOrientation { LowerBetter, HigherBetter };

/// Mean relative change of `metric_values` vs `noswap_values`, sign-adjusted
/// so that positive means improvement under the given orientation.
double gain_vs_noswap(std::span<const double> metric_values, std::span<const double> noswap_values,
                      MetricOrientation orientation);

}  // namespace axswap
