#include "axswap/metrics.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

#include <json.hpp>

#include "axswap/parallel.hpp"

namespace axswap {

namespace {

constexpr u64 kChunkPairs = u64{1} << 16;

u64 abs_diff(i64 approx, i64 precise) {
  // both fit comfortably in i64 (|values| < 2^32), so the difference is safe
  const i64 d = approx - precise;
  return static_cast<u64>(d < 0 ? -d : d);
}

}  // namespace

unsigned default_thread_count() {
  if (const char* env = std::getenv("AXSWAP_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

u64 PairSource::size(const MultiplierModel& model) const {
  if (pairs_) return pairs_->size();
  if (slice_) return slice_->second;
  return model.pair_count();
}

RawPair PairSource::at(const MultiplierModel& model, u64 i) const {
  if (pairs_) return (*pairs_)[static_cast<std::size_t>(i)];
  const u64 idx = (slice_ ? slice_->first : 0) + i;
  const int m = model.width();
  return RawPair{static_cast<u32>(idx >> m) & width_mask(m), static_cast<u32>(idx) & width_mask(m)};
}

namespace {

template <typename PerPair>
ErrorReport accumulate_pairs(const MultiplierModel& model, const PairSource& inputs, unsigned threads,
                             PerPair&& per_pair) {
  const u64 total = inputs.size(model);
  if (total == 0) throw std::invalid_argument("empty operand-pair source");
  if (!inputs.explicit_pairs() && inputs.index_offset() + total > model.pair_count())
    throw std::invalid_argument("slice exceeds the 2^(2M) input space");
  const int m = model.width();
  const u32 mask = width_mask(m);
  const std::vector<RawPair>* list = inputs.explicit_pairs();
  const u64 index_offset = inputs.index_offset();

  auto partials = chunked_map<ErrorReport>(total, kChunkPairs, threads, [&](u64 begin, u64 end) {
    ErrorReport acc;
    if (list) {
      for (u64 i = begin; i < end; ++i) per_pair(acc, (*list)[static_cast<std::size_t>(i)]);
    } else {
      for (u64 i = begin; i < end; ++i) {
        const u64 idx = index_offset + i;
        per_pair(acc, RawPair{static_cast<u32>(idx >> m) & mask, static_cast<u32>(idx) & mask});
      }
    }
    return acc;
  });
  ErrorReport out;
  for (const ErrorReport& p : partials) out.merge(p);
  return out;
}

}  // namespace

ErrorReport component_metrics(const MultiplierModel& model, const std::optional<SwapPolicy>& policy,
                              const PairSource& inputs, unsigned threads) {
  if (policy) apply_policy(*policy, 0, 0, model.width());  // validate once
  return accumulate_pairs(model, inputs, threads, [&](ErrorReport& acc, RawPair p) {
    const RawPair eff = policy ? apply_policy_unchecked(*policy, p.a, p.b) : p;
    const i64 precise = model.exact_product(p.a, p.b);
    const i64 approx = model.product_value(model.evaluate(eff.a, eff.b));
    acc.add_sample(abs_diff(approx, precise), precise);
  });
}

ErrorReport oracle_report(const MultiplierModel& model, const PairSource& inputs, unsigned threads) {
  return accumulate_pairs(model, inputs, threads, [&](ErrorReport& acc, RawPair p) {
    const i64 precise = model.exact_product(p.a, p.b);
    const u64 e_fwd = abs_diff(model.product_value(model.evaluate(p.a, p.b)), precise);
    const u64 e_rev = abs_diff(model.product_value(model.evaluate(p.b, p.a)), precise);
    acc.add_sample(e_fwd <= e_rev ? e_fwd : e_rev, precise);
  });
}

std::string ErrorReport::to_json_string(int indent) const {
  nlohmann::json j{{"mae", mae()},
                   {"wce", wce},
                   {"are", are()},
                   {"are_excluded", are_excluded},
                   {"mse", mse()},
                   {"ep", ep()},
                   {"n", n},
                   {"sum_abs_err", u128_to_string(sum_abs_err)},
                   {"sum_sq_err", u128_to_string(sum_sq_err)},
                   {"err_count", err_count}};
  return j.dump(indent);
}

std::string ErrorReport::csv_header() {
  return "mae,wce,are,are_excluded,mse,ep,n,sum_abs_err,sum_sq_err,err_count";
}

std::string ErrorReport::to_csv_row() const {
  std::ostringstream os;
  os.precision(17);
  os << mae() << ',' << wce << ',' << are() << ',' << are_excluded << ',' << mse() << ',' << ep() << ',' << n << ','
     << u128_to_string(sum_abs_err) << ',' << u128_to_string(sum_sq_err) << ',' << err_count;
  return os.str();
}

double miss_rate(std::span<const u8> outcomes_wrong) {
  if (outcomes_wrong.empty()) throw std::invalid_argument("empty outcome sequence");
  u64 wrong = 0;
  for (u8 o : outcomes_wrong) wrong += o ? 1 : 0;
  return static_cast<double>(wrong) / static_cast<double>(outcomes_wrong.size());
}

double app_are(std::span<const double> approx, std::span<const double> precise) {
  if (approx.size() != precise.size()) throw std::invalid_argument("sequence length mismatch");
  if (approx.empty()) throw std::invalid_argument("empty sequences");
  double sum = 0.0;
  for (std::size_t i = 0; i < approx.size(); ++i) {
    if (precise[i] == 0.0)
      sum += approx[i] == 0.0 ? 0.0 : 1.0;
    else
      sum += std::abs(approx[i] - precise[i]) / std::abs(precise[i]);
  }
  return sum / static_cast<double>(approx.size());
}

double gain_vs_noswap(std::span<const double> metric_values, std::span<const double> noswap_values,
                      MetricOrientation orientation) {
  if (metric_values.size() != noswap_values.size()) throw std::invalid_argument("gain input length mismatch");
  if (metric_values.empty()) throw std::invalid_argument("gain inputs empty");
  double sum = 0.0;
  for (std::size_t i = 0; i < metric_values.size(); ++i) {
    if (noswap_values[i] == 0.0) throw std::domain_error("NoSwap metric value is zero");
    sum += (metric_values[i] - noswap_values[i]) / noswap_values[i];
  }
  const double mean = sum / static_cast<double>(metric_values.size());
  return orientation == MetricOrientation::LowerBetter ? -mean : mean;
}

double ssim(std::span<const u8> img_a, std::span<const u8> img_b, int width, int height) {
  if (width <= 0 || height <= 0 || img_a.size() != static_cast<std::size_t>(width) * height ||
      img_b.size() != img_a.size())
    throw std::invalid_argument("image dimension mismatch");
  constexpr int kWin = 8;
  if (width < kWin || height < kWin) throw std::invalid_argument("image smaller than the 8x8 SSIM window");
  constexpr double kC1 = (0.01 * 255) * (0.01 * 255);
  constexpr double kC2 = (0.03 * 255) * (0.03 * 255);

  // summed-area tables over x, y, x^2, y^2, xy; all sums are exact in double
  const int sw = width + 1;
  const int sh = height + 1;
  std::vector<double> sx(static_cast<std::size_t>(sw) * sh, 0.0), sy = sx, sxx = sx, syy = sx, sxy = sx;
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) {
      const double x = img_a[static_cast<std::size_t>(r) * width + c];
      const double y = img_b[static_cast<std::size_t>(r) * width + c];
      const std::size_t i = static_cast<std::size_t>(r + 1) * sw + (c + 1);
      const std::size_t up = i - sw, left = i - 1, diag = up - 1;
      sx[i] = x + sx[up] + sx[left] - sx[diag];
      sy[i] = y + sy[up] + sy[left] - sy[diag];
      sxx[i] = x * x + sxx[up] + sxx[left] - sxx[diag];
      syy[i] = y * y + syy[up] + syy[left] - syy[diag];
      sxy[i] = x * y + sxy[up] + sxy[left] - sxy[diag];
    }
  }
  auto window_sum = [&](const std::vector<double>& s, int r, int c) {
    const std::size_t i0 = static_cast<std::size_t>(r) * sw + c;
    const std::size_t i1 = static_cast<std::size_t>(r + kWin) * sw + (c + kWin);
    return s[i1] - s[static_cast<std::size_t>(r) * sw + c + kWin] - s[static_cast<std::size_t>(r + kWin) * sw + c] +
           s[i0];
  };

  constexpr double kInvN = 1.0 / (kWin * kWin);
  double total = 0.0;
  u64 windows = 0;
  for (int r = 0; r + kWin <= height; ++r) {
    for (int c = 0; c + kWin <= width; ++c) {
      const double mx = window_sum(sx, r, c) * kInvN;
      const double my = window_sum(sy, r, c) * kInvN;
      const double vx = window_sum(sxx, r, c) * kInvN - mx * mx;
      const double vy = window_sum(syy, r, c) * kInvN - my * my;
      const double cov = window_sum(sxy, r, c) * kInvN - mx * my;
      total += ((2 * mx * my + kC1) * (2 * cov + kC2)) / ((mx * mx + my * my + kC1) * (vx + vy + kC2));
      ++windows;
    }
  }
  return total / static_cast<double>(windows);
}

}  // namespace axswap
