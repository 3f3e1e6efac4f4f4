#pragma once

#include <complex>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "axswap/image.hpp"
#include "axswap/trace.hpp"
#include "axswap/tuner.hpp"
#include "axswap/widearith.hpp"

namespace axswap {

struct FxComplex {
  Fx32 re, im;
  friend bool operator==(const FxComplex&, const FxComplex&) = default;
};

// ---- Benchmark kernels (Q16.16 over the configured multiplier substrate)
// and their double-precision reference pipelines.

/// 3x3 Sobel edge detection, |Gx| + |Gy| magnitude, zero border. Each kernel
/// is applied as four coefficient multiplications (the +/-1 pair terms are
/// pre-added), 8 fixed-point multiplications per interior pixel.
GrayImage run_sobel(const GrayImage& img, const WideMulConfig& cfg, const SwapDecision& decision = NoSwapTag{},
                    MulHooks* hooks = nullptr);
GrayImage sobel_reference(const GrayImage& img);

/// Lloyd k-means color quantization on [0,1]-normalized channels. Farthest
/// point initialization from a seeded first pick (computed in exact integer
/// arithmetic so approximate and reference runs start identically); empty
/// clusters are re-seeded with the farthest assigned point.
RgbImage run_kmeans(const RgbImage& img, int k, int max_iters, u64 seed, const WideMulConfig& cfg,
                    const SwapDecision& decision = NoSwapTag{}, MulHooks* hooks = nullptr);
RgbImage kmeans_reference(const RgbImage& img, int k, int max_iters, u64 seed);

inline constexpr int kKmeansClusters = 5;
inline constexpr int kKmeansMaxIters = 10;

/// Iterative radix-2 decimation-in-time FFT; all twiddle multiplications go
/// through the configured substrate. Length must be a power of two.
std::vector<FxComplex> run_fft(std::span<const FxComplex> signal, const WideMulConfig& cfg,
                               const SwapDecision& decision = NoSwapTag{}, MulHooks* hooks = nullptr);
std::vector<std::complex<double>> fft_reference(std::span<const std::complex<double>> signal);

// ---- Datasets.

enum class DatasetKind { Train, Test };
std::string dataset_kind_name(DatasetKind kind);

/// Deterministic desk-scale input corpus: fixed pattern cards plus seeded
/// synthetic textures for the image benchmarks, seeded multi-tone signals for
/// the FFT. Train and test draw disjoint cards and disjoint seed streams.
struct Dataset {
  DatasetKind kind = DatasetKind::Train;
  u64 seed = 0;
  std::vector<std::pair<std::string, GrayImage>> gray_images;
  std::vector<std::pair<std::string, RgbImage>> color_images;
  std::vector<std::pair<std::string, std::vector<FxComplex>>> signals;
};

Dataset generate_dataset(DatasetKind kind, u64 seed);

/// JSON manifest (file names and FNV-1a 64 content hashes, sorted by name).
std::string dataset_manifest_json(const Dataset& ds);
std::string dataset_manifest_hash(const Dataset& ds);

/// Materializes the dataset plus manifest.json under dir.
void write_dataset(const Dataset& ds, const std::filesystem::path& dir);
Dataset load_dataset(const std::filesystem::path& dir);

// AXSG signal file: 16-byte header (magic "AXSG", version u16 LE, reserved
// u16, sample count u64 LE) + count x (re i32 LE, im i32 LE) Q16.16 words.
void write_signal(std::span<const FxComplex> signal, const std::filesystem::path& path);
std::vector<FxComplex> read_signal(const std::filesystem::path& path);

// ---- Benchmark registry and application-level drivers.

enum class BenchmarkId { Sobel, Kmeans, Fft };
std::string benchmark_name(BenchmarkId id);
std::optional<BenchmarkId> benchmark_from_name(const std::string& name);
ObjectiveId benchmark_objective(BenchmarkId id);  // SSIM for the image benchmarks, AppARE for the FFT

/// Score of one configured run over a dataset against the double-precision
/// reference on the same inputs: mean SSIM over images, or AppARE over all
/// flattened spectrum components.
double score_benchmark(BenchmarkId id, const Dataset& ds, const WideMulConfig& cfg,
                       const SwapDecision& decision = NoSwapTag{}, MulHooks* hooks = nullptr);

/// Application-level tuning: one full benchmark run per candidate (NoSwap
/// plus all 4n single-bit policies), the same policy applied to every
/// approximate multiplication of a run. NoSwap wins ties.
TuningResult tune_application(BenchmarkId id, const WideMulConfig& cfg, ObjectiveId objective, const Dataset& train,
                              unsigned threads = 0);

/// Operand trace of every sub-multiplication of a full benchmark run.
OperandTrace record_trace(BenchmarkId id, const Dataset& ds, const WideMulConfig& cfg,
                          const SwapDecision& decision = NoSwapTag{});

}  // namespace axswap
