#include "axswap/apps.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "axswap/metrics.hpp"
#include "axswap/parallel.hpp"

namespace axswap {

// ---- Sobel ----------------------------------------------------------------

namespace {

struct SobelTaps {
  // kernel response = c1*(p_a + p_b) + c2*p_c - c1*(p_d + p_e) - c2*p_f
  int a, b, c, d, e, f;  // neighbor offsets into a 3x3 window, row-major 0..8
};
constexpr SobelTaps kGxTaps{2, 8, 5, 0, 6, 3};  // +right column, -left column
constexpr SobelTaps kGyTaps{6, 8, 7, 0, 2, 1};  // +bottom row, -top row

}  // namespace

// Pixels enter the kernels normalized to [0,1]; the magnitude is scaled back
// to 8 bits on output.
GrayImage run_sobel(const GrayImage& img, const WideMulConfig& cfg, const SwapDecision& decision, MulHooks* hooks) {
  if (img.width < 3 || img.height < 3) throw std::invalid_argument("sobel needs at least a 3x3 image");
  GrayImage out = GrayImage::blank(img.width, img.height);
  std::array<Fx32, 256> lut;
  for (int v = 0; v < 256; ++v) lut[static_cast<size_t>(v)] = fx_from_real(v / 255.0);
  const Fx32 one = fx_from_int(1), two = fx_from_int(2);
  std::array<Fx32, 9> w;
  for (int r = 1; r + 1 < img.height; ++r) {
    for (int c = 1; c + 1 < img.width; ++c) {
      for (int dr = -1; dr <= 1; ++dr)
        for (int dc = -1; dc <= 1; ++dc)
          w[static_cast<size_t>((dr + 1) * 3 + dc + 1)] = lut[img.at(r + dr, c + dc)];
      auto kernel = [&](const SobelTaps& t) {
        const Fx32 plus = fx_add(fx_mul(cfg, fx_add(w[t.a], w[t.b], hooks), one, decision, hooks),
                                 fx_mul(cfg, w[t.c], two, decision, hooks), hooks);
        const Fx32 minus = fx_add(fx_mul(cfg, fx_add(w[t.d], w[t.e], hooks), one, decision, hooks),
                                  fx_mul(cfg, w[t.f], two, decision, hooks), hooks);
        return fx_sub(plus, minus, hooks);
      };
      const Fx32 mag = fx_add(fx_abs(kernel(kGxTaps)), fx_abs(kernel(kGyTaps)), hooks);
      out.at(r, c) = static_cast<u8>(std::clamp<long>(std::lround(fx_to_real(mag) * 255.0), 0, 255));
    }
  }
  return out;
}

GrayImage sobel_reference(const GrayImage& img) {
  if (img.width < 3 || img.height < 3) throw std::invalid_argument("sobel needs at least a 3x3 image");
  GrayImage out = GrayImage::blank(img.width, img.height);
  std::array<double, 9> w;
  for (int r = 1; r + 1 < img.height; ++r) {
    for (int c = 1; c + 1 < img.width; ++c) {
      for (int dr = -1; dr <= 1; ++dr)
        for (int dc = -1; dc <= 1; ++dc) w[static_cast<size_t>((dr + 1) * 3 + dc + 1)] = img.at(r + dr, c + dc) / 255.0;
      auto kernel = [&](const SobelTaps& t) { return (w[t.a] + w[t.b]) + 2.0 * w[t.c] - (w[t.d] + w[t.e]) - 2.0 * w[t.f]; };
      const double mag = std::abs(kernel(kGxTaps)) + std::abs(kernel(kGyTaps));
      out.at(r, c) = static_cast<u8>(std::clamp<long>(std::lround(mag * 255.0), 0, 255));
    }
  }
  return out;
}

// ---- K-means ---------------------------------------------------------------

namespace {

// Farthest-point seeding on the raw 8-bit colors; shared by the approximate
// and reference pipelines so both start from identical centroids.
std::vector<std::size_t> kmeans_seed_indices(const RgbImage& img, int k, u64 seed) {
  const std::size_t n = static_cast<std::size_t>(img.width) * img.height;
  if (k < 2) throw std::invalid_argument("k must be at least 2");
  std::vector<std::size_t> picks;
  picks.push_back(static_cast<std::size_t>(SplitMix64(seed).below(n)));
  std::vector<i64> best_dist(n, INT64_MAX);
  while (picks.size() < static_cast<std::size_t>(k)) {
    const u8* chosen = &img.pixels[picks.back() * 3];
    std::size_t far_idx = 0;
    i64 far_dist = -1;
    for (std::size_t i = 0; i < n; ++i) {
      const u8* p = &img.pixels[i * 3];
      i64 d = 0;
      for (int ch = 0; ch < 3; ++ch) {
        const i64 diff = static_cast<i64>(p[ch]) - chosen[ch];
        d += diff * diff;
      }
      best_dist[i] = std::min(best_dist[i], d);
      if (best_dist[i] > far_dist) {
        far_dist = best_dist[i];
        far_idx = i;
      }
    }
    picks.push_back(far_idx);
  }
  return picks;
}

struct FxColor {
  std::array<Fx32, 3> ch{};
};

Fx32 fx_color_dist(const WideMulConfig& cfg, const FxColor& a, const FxColor& b, const SwapDecision& decision,
                   MulHooks* hooks) {
  Fx32 acc{0};
  for (int c = 0; c < 3; ++c) {
    const Fx32 d = fx_sub(a.ch[c], b.ch[c], hooks);
    acc = fx_add(acc, fx_mul(cfg, d, d, decision, hooks), hooks);
  }
  return acc;
}

}  // namespace

RgbImage run_kmeans(const RgbImage& img, int k, int max_iters, u64 seed, const WideMulConfig& cfg,
                    const SwapDecision& decision, MulHooks* hooks) {
  const std::size_t n = static_cast<std::size_t>(img.width) * img.height;
  if (n == 0) throw std::invalid_argument("empty image");

  std::array<Fx32, 256> lut;
  for (int v = 0; v < 256; ++v) lut[static_cast<size_t>(v)] = fx_from_real(v / 255.0);
  std::vector<FxColor> points(n);
  for (std::size_t i = 0; i < n; ++i)
    for (int c = 0; c < 3; ++c) points[i].ch[static_cast<size_t>(c)] = lut[img.pixels[i * 3 + c]];

  std::vector<FxColor> centroids;
  for (std::size_t idx : kmeans_seed_indices(img, k, seed)) centroids.push_back(points[idx]);

  std::vector<int> assign(n, 0);
  for (int iter = 0; iter < max_iters; ++iter) {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      int best = 0;
      Fx32 best_d = fx_color_dist(cfg, points[i], centroids[0], decision, hooks);
      for (int c = 1; c < k; ++c) {
        const Fx32 d = fx_color_dist(cfg, points[i], centroids[static_cast<size_t>(c)], decision, hooks);
        if (d.raw < best_d.raw) {
          best_d = d;
          best = c;
        }
      }
      if (assign[i] != best) {
        assign[i] = best;
        changed = true;
      }
    }
    if (!changed && iter > 0) break;

    std::vector<std::array<i64, 3>> sums(static_cast<size_t>(k), {0, 0, 0});
    std::vector<i64> counts(static_cast<size_t>(k), 0);
    for (std::size_t i = 0; i < n; ++i) {
      for (int c = 0; c < 3; ++c) sums[static_cast<size_t>(assign[i])][static_cast<size_t>(c)] += points[i].ch[static_cast<size_t>(c)].raw;
      ++counts[static_cast<size_t>(assign[i])];
    }
    for (int c = 0; c < k; ++c) {
      if (counts[static_cast<size_t>(c)] == 0) {
        // farthest assigned point becomes the new centroid
        std::size_t far_idx = 0;
        i32 far_d = -1;
        for (std::size_t i = 0; i < n; ++i) {
          const Fx32 d = fx_color_dist(cfg, points[i], centroids[static_cast<size_t>(assign[i])], decision, hooks);
          if (d.raw > far_d) {
            far_d = d.raw;
            far_idx = i;
          }
        }
        centroids[static_cast<size_t>(c)] = points[far_idx];
        continue;
      }
      for (int ch = 0; ch < 3; ++ch)
        centroids[static_cast<size_t>(c)].ch[static_cast<size_t>(ch)] =
            Fx32{static_cast<i32>(sums[static_cast<size_t>(c)][static_cast<size_t>(ch)] / counts[static_cast<size_t>(c)])};
    }
  }

  RgbImage out = RgbImage::blank(img.width, img.height);
  for (std::size_t i = 0; i < n; ++i)
    for (int c = 0; c < 3; ++c)
      out.pixels[i * 3 + c] = static_cast<u8>(
          std::clamp<long>(std::lround(fx_to_real(centroids[static_cast<size_t>(assign[i])].ch[static_cast<size_t>(c)]) * 255.0), 0, 255));
  return out;
}

RgbImage kmeans_reference(const RgbImage& img, int k, int max_iters, u64 seed) {
  const std::size_t n = static_cast<std::size_t>(img.width) * img.height;
  if (n == 0) throw std::invalid_argument("empty image");

  std::vector<std::array<double, 3>> points(n);
  for (std::size_t i = 0; i < n; ++i)
    for (int c = 0; c < 3; ++c) points[i][static_cast<size_t>(c)] = img.pixels[i * 3 + c] / 255.0;

  std::vector<std::array<double, 3>> centroids;
  for (std::size_t idx : kmeans_seed_indices(img, k, seed)) centroids.push_back(points[idx]);

  auto dist = [](const std::array<double, 3>& a, const std::array<double, 3>& b) {
    double acc = 0;
    for (int c = 0; c < 3; ++c) acc += (a[static_cast<size_t>(c)] - b[static_cast<size_t>(c)]) * (a[static_cast<size_t>(c)] - b[static_cast<size_t>(c)]);
    return acc;
  };

  std::vector<int> assign(n, 0);
  for (int iter = 0; iter < max_iters; ++iter) {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      int best = 0;
      double best_d = dist(points[i], centroids[0]);
      for (int c = 1; c < k; ++c) {
        const double d = dist(points[i], centroids[static_cast<size_t>(c)]);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      if (assign[i] != best) {
        assign[i] = best;
        changed = true;
      }
    }
    if (!changed && iter > 0) break;

    std::vector<std::array<double, 3>> sums(static_cast<size_t>(k), {0, 0, 0});
    std::vector<i64> counts(static_cast<size_t>(k), 0);
    for (std::size_t i = 0; i < n; ++i) {
      for (int c = 0; c < 3; ++c) sums[static_cast<size_t>(assign[i])][static_cast<size_t>(c)] += points[i][static_cast<size_t>(c)];
      ++counts[static_cast<size_t>(assign[i])];
    }
    for (int c = 0; c < k; ++c) {
      if (counts[static_cast<size_t>(c)] == 0) {
        std::size_t far_idx = 0;
        double far_d = -1;
        for (std::size_t i = 0; i < n; ++i) {
          const double d = dist(points[i], centroids[static_cast<size_t>(assign[i])]);
          if (d > far_d) {
            far_d = d;
            far_idx = i;
          }
        }
        centroids[static_cast<size_t>(c)] = points[far_idx];
        continue;
      }
      for (int ch = 0; ch < 3; ++ch) centroids[static_cast<size_t>(c)][static_cast<size_t>(ch)] = sums[static_cast<size_t>(c)][static_cast<size_t>(ch)] / static_cast<double>(counts[static_cast<size_t>(c)]);
    }
  }

  RgbImage out = RgbImage::blank(img.width, img.height);
  for (std::size_t i = 0; i < n; ++i)
    for (int c = 0; c < 3; ++c)
      out.pixels[i * 3 + c] =
          static_cast<u8>(std::clamp<long>(std::lround(centroids[static_cast<size_t>(assign[i])][static_cast<size_t>(c)] * 255.0), 0, 255));
  return out;
}

// ---- FFT -------------------------------------------------------------------

namespace {

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

template <typename T>
void bit_reverse_permute(std::vector<T>& a) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
}

}  // namespace

std::vector<FxComplex> run_fft(std::span<const FxComplex> signal, const WideMulConfig& cfg,
                               const SwapDecision& decision, MulHooks* hooks) {
  if (!is_pow2(signal.size())) throw std::invalid_argument("FFT length must be a power of two");
  std::vector<FxComplex> a(signal.begin(), signal.end());
  bit_reverse_permute(a);
  const std::size_t n = a.size();
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len >> 1;
    std::vector<FxComplex> tw(half);
    for (std::size_t j = 0; j < half; ++j) {
      const double ang = -2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(len);
      tw[j] = {fx_from_real(std::cos(ang)), fx_from_real(std::sin(ang))};
    }
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t j = 0; j < half; ++j) {
        const FxComplex u = a[i + j];
        const FxComplex v = a[i + j + half];
        const FxComplex w = tw[j];
        const FxComplex t{fx_sub(fx_mul(cfg, w.re, v.re, decision, hooks), fx_mul(cfg, w.im, v.im, decision, hooks), hooks),
                          fx_add(fx_mul(cfg, w.re, v.im, decision, hooks), fx_mul(cfg, w.im, v.re, decision, hooks), hooks)};
        a[i + j] = {fx_add(u.re, t.re, hooks), fx_add(u.im, t.im, hooks)};
        a[i + j + half] = {fx_sub(u.re, t.re, hooks), fx_sub(u.im, t.im, hooks)};
      }
    }
  }
  return a;
}

std::vector<std::complex<double>> fft_reference(std::span<const std::complex<double>> signal) {
  if (!is_pow2(signal.size())) throw std::invalid_argument("FFT length must be a power of two");
  std::vector<std::complex<double>> a(signal.begin(), signal.end());
  bit_reverse_permute(a);
  const std::size_t n = a.size();
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len >> 1;
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t j = 0; j < half; ++j) {
        const double ang = -2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(len);
        const std::complex<double> w{std::cos(ang), std::sin(ang)};
        const std::complex<double> u = a[i + j];
        const std::complex<double> t = w * a[i + j + half];
        a[i + j] = u + t;
        a[i + j + half] = u - t;
      }
    }
  }
  return a;
}

// ---- Registry and drivers ---------------------------------------------------

std::string benchmark_name(BenchmarkId id) {
  switch (id) {
    case BenchmarkId::Sobel: return "sobel";
    case BenchmarkId::Kmeans: return "kmeans";
    case BenchmarkId::Fft: return "fft";
  }
  return "?";
}

std::optional<BenchmarkId> benchmark_from_name(const std::string& name) {
  for (BenchmarkId id : {BenchmarkId::Sobel, BenchmarkId::Kmeans, BenchmarkId::Fft})
    if (benchmark_name(id) == name) return id;
  return std::nullopt;
}

ObjectiveId benchmark_objective(BenchmarkId id) {
  return id == BenchmarkId::Fft ? ObjectiveId::AppARE : ObjectiveId::SSIM;
}

namespace {

u64 kmeans_image_seed(const std::string& name) { return fnv1a64(name.data(), name.size()); }

}  // namespace

double score_benchmark(BenchmarkId id, const Dataset& ds, const WideMulConfig& cfg, const SwapDecision& decision,
                       MulHooks* hooks) {
  switch (id) {
    case BenchmarkId::Sobel: {
      if (ds.gray_images.empty()) throw std::invalid_argument("dataset has no grayscale images");
      double total = 0;
      for (const auto& [name, img] : ds.gray_images) {
        const GrayImage approx = run_sobel(img, cfg, decision, hooks);
        const GrayImage ref = sobel_reference(img);
        total += ssim(approx.pixels, ref.pixels, img.width, img.height);
      }
      return total / static_cast<double>(ds.gray_images.size());
    }
    case BenchmarkId::Kmeans: {
      if (ds.color_images.empty()) throw std::invalid_argument("dataset has no color images");
      double total = 0;
      for (const auto& [name, img] : ds.color_images) {
        const u64 seed = kmeans_image_seed(name);
        const RgbImage approx = run_kmeans(img, kKmeansClusters, kKmeansMaxIters, seed, cfg, decision, hooks);
        const RgbImage ref = kmeans_reference(img, kKmeansClusters, kKmeansMaxIters, seed);
        const GrayImage ya = to_luma(approx), yr = to_luma(ref);
        total += ssim(ya.pixels, yr.pixels, img.width, img.height);
      }
      return total / static_cast<double>(ds.color_images.size());
    }
    case BenchmarkId::Fft: {
      if (ds.signals.empty()) throw std::invalid_argument("dataset has no signals");
      std::vector<double> approx_flat, ref_flat;
      for (const auto& [name, sig] : ds.signals) {
        const std::vector<FxComplex> out = run_fft(sig, cfg, decision, hooks);
        std::vector<std::complex<double>> in_real(sig.size());
        for (std::size_t i = 0; i < sig.size(); ++i) in_real[i] = {fx_to_real(sig[i].re), fx_to_real(sig[i].im)};
        const std::vector<std::complex<double>> ref = fft_reference(in_real);
        for (std::size_t i = 0; i < out.size(); ++i) {
          approx_flat.push_back(fx_to_real(out[i].re));
          approx_flat.push_back(fx_to_real(out[i].im));
          ref_flat.push_back(ref[i].real());
          ref_flat.push_back(ref[i].imag());
        }
      }
      return app_are(approx_flat, ref_flat);
    }
  }
  throw std::invalid_argument("unknown benchmark");
}

TuningResult tune_application(BenchmarkId id, const WideMulConfig& cfg, ObjectiveId objective, const Dataset& train,
                              unsigned threads) {
  if (objective != benchmark_objective(id))
    throw std::invalid_argument("objective " + objective_name(objective) + " does not match benchmark " +
                                benchmark_name(id));
  const auto candidates = candidate_policies(cfg.half_width);
  auto scores = chunked_map<double>(candidates.size(), 1, threads, [&](u64 begin, u64) {
    const auto& policy = candidates[static_cast<std::size_t>(begin)];
    const SwapDecision decision = policy ? SwapDecision{*policy} : SwapDecision{NoSwapTag{}};
    return score_benchmark(id, train, cfg, decision);
  });

  TuningResult result;
  result.objective = objective;
  result.noswap_metric = scores[0];
  const bool higher = objective_higher_is_better(objective);
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i)
    if (higher ? scores[i] > scores[best] : scores[i] < scores[best]) best = i;
  result.best_policy = candidates[best];
  result.best_metric = scores[best];
  for (std::size_t i = 0; i < candidates.size(); ++i) result.table.push_back({candidates[i], scores[i]});
  return result;
}

OperandTrace record_trace(BenchmarkId id, const Dataset& ds, const WideMulConfig& cfg, const SwapDecision& decision) {
  OperandTrace trace;
  trace.width = cfg.half_width;
  trace.signedness = Signedness::Signed;
  trace.source = benchmark_name(id);
  RecordingSink sink(trace);
  MulHooks hooks{&sink, nullptr};
  score_benchmark(id, ds, cfg, decision, &hooks);
  return trace;
}

}  // namespace axswap
