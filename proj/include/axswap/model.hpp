#pragma once

#include <atomic>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "axswap/common.hpp"

namespace axswap {

enum class ModelKind : u8 { Exact = 0, TruncateOperand = 1, DropPartialProducts = 2, TruthTable = 3 };

/// Set of zeroed partial-product positions for an M x M array multiplier.
/// Row indexes bits of operand B, column indexes bits of operand A; the
/// partial product at (row, col) has weight 2^(row+col).
class PartialProductMask {
 public:
  PartialProductMask() = default;
  PartialProductMask(int width, const std::vector<std::pair<int, int>>& dropped_positions);

  int width() const { return width_; }
  bool dropped(int row, int col) const { return rows_[static_cast<size_t>(row)] >> col & 1; }
  /// Symmetric under (row,col) -> (col,row); such masks keep the multiplier commutative.
  bool symmetric() const;
  std::vector<std::pair<int, int>> dropped_positions() const;

 private:
  int width_ = 0;
  std::vector<u32> rows_;  // bit c of rows_[r] set iff (r, c) is dropped
};

/// Behavioral M-bit x M-bit -> 2M-bit multiplier. Immutable after
/// construction; evaluate is pure and safe to call from any thread.
class MultiplierModel {
 public:
  static MultiplierModel exact(int width, Signedness s);
  /// Clears the lowest `dropped_lsbs` bits of the selected operand's raw
  /// encoding before multiplying exactly. Requires 0 <= dropped_lsbs < width.
  static MultiplierModel truncate_operand(int width, Signedness s, Operand which, int dropped_lsbs);
  static MultiplierModel drop_partial_products(int width, Signedness s, PartialProductMask mask);
  static MultiplierModel truth_table(int width, Signedness s, std::vector<u32> entries);

  int width() const { return width_; }
  Signedness signedness() const { return signedness_; }
  ModelKind kind() const { return kind_; }

  /// Raw 2M-bit product encoding for raw M-bit operand encodings.
  u32 evaluate(u32 a_raw, u32 b_raw) const;

  /// Numeric value of an operand / product raw encoding under this model's signedness.
  i64 operand_value(u32 raw) const { return decode_value(raw, width_, signedness_); }
  i64 product_value(u32 raw) const { return decode_value(raw, 2 * width_, signedness_); }
  /// True 2M-bit product of the numeric operand values.
  i64 exact_product(u32 a_raw, u32 b_raw) const { return operand_value(a_raw) * operand_value(b_raw); }

  u64 operand_count() const { return u64{1} << width_; }
  u64 pair_count() const { return u64{1} << (2 * width_); }

  const std::vector<u32>& table_entries() const;
  const PartialProductMask& mask() const { return mask_; }
  Operand truncated_operand() const { return trunc_which_; }
  int dropped_lsbs() const { return trunc_k_; }

  /// One-line description, e.g. "truncb:8u:k=2".
  std::string describe() const;

 private:
  MultiplierModel(int width, Signedness s, ModelKind kind);
  void check_operands(u32 a_raw, u32 b_raw) const;

  int width_;
  Signedness signedness_;
  ModelKind kind_;
  Operand trunc_which_ = Operand::B;
  int trunc_k_ = 0;
  PartialProductMask mask_;
  // Per-row column masks for the partial-product evaluator: bit c of
  // row_keep_[r] set iff position (r, c) is kept. Sign column handled apart.
  std::vector<u32> row_keep_;
  std::shared_ptr<const std::vector<u32>> table_;
};

/// Commutativity check. Exhaustive for width <= 12; wider models are sampled
/// with 2^24 pseudo-random pairs (seed kCommutativitySampleSeed) unless
/// force_exhaustive is set.
inline constexpr u64 kCommutativitySampleSeed = 0x5caff01d5eedULL;
bool is_commutative(const MultiplierModel& model, bool force_exhaustive = false);

/// Opt-in counter of MultiplierModel::evaluate calls, for stimulation-count
/// verification. Counts every evaluate on every model while alive.
class EvalCounterGuard {
 public:
  EvalCounterGuard();
  ~EvalCounterGuard();
  EvalCounterGuard(const EvalCounterGuard&) = delete;
  EvalCounterGuard& operator=(const EvalCounterGuard&) = delete;
  u64 count() const { return counter_.load(std::memory_order_relaxed); }

 private:
  std::atomic<u64> counter_{0};
};

}  // namespace axswap
