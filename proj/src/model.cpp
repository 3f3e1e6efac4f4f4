#include "axswap/model.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>

namespace axswap {

namespace {
std::atomic<std::atomic<u64>*> g_eval_counter{nullptr};
}

EvalCounterGuard::EvalCounterGuard() { g_eval_counter.store(&counter_, std::memory_order_release); }
EvalCounterGuard::~EvalCounterGuard() { g_eval_counter.store(nullptr, std::memory_order_release); }

PartialProductMask::PartialProductMask(int width, const std::vector<std::pair<int, int>>& dropped_positions)
    : width_(width), rows_(static_cast<size_t>(width), 0) {
  for (auto [row, col] : dropped_positions) {
    if (row < 0 || row >= width || col < 0 || col >= width)
      throw std::invalid_argument("partial-product position out of range");
    rows_[static_cast<size_t>(row)] |= u32{1} << col;
  }
}

bool PartialProductMask::symmetric() const {
  for (int r = 0; r < width_; ++r)
    for (int c = 0; c < r; ++c)
      if (dropped(r, c) != dropped(c, r)) return false;
  return true;
}

std::vector<std::pair<int, int>> PartialProductMask::dropped_positions() const {
  std::vector<std::pair<int, int>> out;
  for (int r = 0; r < width_; ++r)
    for (int c = 0; c < width_; ++c)
      if (dropped(r, c)) out.emplace_back(r, c);
  return out;
}

MultiplierModel::MultiplierModel(int width, Signedness s, ModelKind kind)
    : width_(width), signedness_(s), kind_(kind) {
  if (width < 2 || width > 16) throw std::invalid_argument("multiplier width must be in [2, 16]");
}

MultiplierModel MultiplierModel::exact(int width, Signedness s) {
  return MultiplierModel(width, s, ModelKind::Exact);
}

MultiplierModel MultiplierModel::truncate_operand(int width, Signedness s, Operand which, int dropped_lsbs) {
  MultiplierModel m(width, s, ModelKind::TruncateOperand);
  if (dropped_lsbs < 0 || dropped_lsbs >= width)
    throw std::invalid_argument("dropped-LSB count must be in [0, width)");
  m.trunc_which_ = which;
  m.trunc_k_ = dropped_lsbs;
  return m;
}

MultiplierModel MultiplierModel::drop_partial_products(int width, Signedness s, PartialProductMask mask) {
  MultiplierModel m(width, s, ModelKind::DropPartialProducts);
  if (mask.width() != width) throw std::invalid_argument("mask width does not match model width");
  m.row_keep_.assign(static_cast<size_t>(width), 0);
  for (int r = 0; r < width; ++r)
    for (int c = 0; c < width; ++c)
      if (!mask.dropped(r, c)) m.row_keep_[static_cast<size_t>(r)] |= u32{1} << c;
  m.mask_ = std::move(mask);
  return m;
}

MultiplierModel MultiplierModel::truth_table(int width, Signedness s, std::vector<u32> entries) {
  MultiplierModel m(width, s, ModelKind::TruthTable);
  if (entries.size() != m.pair_count()) throw std::invalid_argument("truth table must have 2^(2M) entries");
  const u32 out_mask = width_mask(2 * width);
  for (u32 e : entries)
    if (e & ~out_mask) throw std::invalid_argument("truth table entry exceeds 2M bits");
  m.table_ = std::make_shared<const std::vector<u32>>(std::move(entries));
  return m;
}

const std::vector<u32>& MultiplierModel::table_entries() const {
  if (!table_) throw std::logic_error("model has no truth table");
  return *table_;
}

void MultiplierModel::check_operands(u32 a_raw, u32 b_raw) const {
  if ((a_raw | b_raw) & ~width_mask(width_))
    throw std::invalid_argument("operand does not fit the model width");
}

u32 MultiplierModel::evaluate(u32 a_raw, u32 b_raw) const {
  check_operands(a_raw, b_raw);
  if (auto* c = g_eval_counter.load(std::memory_order_acquire)) c->fetch_add(1, std::memory_order_relaxed);
  switch (kind_) {
    case ModelKind::Exact:
      return encode_value(exact_product(a_raw, b_raw), 2 * width_);
    case ModelKind::TruncateOperand: {
      const u32 keep = ~width_mask(trunc_k_);
      u32 a = a_raw, b = b_raw;
      (trunc_which_ == Operand::A ? a : b) &= keep;
      return encode_value(exact_product(a, b), 2 * width_);
    }
    case ModelKind::DropPartialProducts: {
      // product = sum over kept (r,c) of s_r*s_c*a_c*b_r*2^(r+c), where the
      // sign weight s_i is -1 on the sign index for signed models.
      const int sign_idx = width_ - 1;
      const bool is_signed = signedness_ == Signedness::Signed;
      i64 sum = 0;
      for (int r = 0; r < width_; ++r) {
        if (!(b_raw >> r & 1)) continue;
        const u32 keep = row_keep_[static_cast<size_t>(r)];
        i64 inner = static_cast<i64>(a_raw & keep);
        if (is_signed && (a_raw >> sign_idx & 1) && (keep >> sign_idx & 1))
          inner -= i64{2} << sign_idx;  // flip the +2^(M-1) term to -2^(M-1)
        if (is_signed && r == sign_idx) inner = -inner;
        sum += inner << r;
      }
      return encode_value(sum, 2 * width_);
    }
    case ModelKind::TruthTable:
      return (*table_)[(static_cast<size_t>(a_raw) << width_) | b_raw];
  }
  return 0;  // unreachable
}

std::string MultiplierModel::describe() const {
  const std::string ws = std::to_string(width_) + (signedness_ == Signedness::Signed ? "s" : "u");
  switch (kind_) {
    case ModelKind::Exact:
      return "exact:" + ws;
    case ModelKind::TruncateOperand:
      return (trunc_which_ == Operand::A ? "trunca:" : "truncb:") + ws + ":k=" + std::to_string(trunc_k_);
    case ModelKind::DropPartialProducts:
      return "droppp:" + ws + ":dropped=" + std::to_string(mask_.dropped_positions().size());
    case ModelKind::TruthTable:
      return "table:" + ws;
  }
  return ws;
}

bool is_commutative(const MultiplierModel& model, bool force_exhaustive) {
  const int m = model.width();
  if (m <= 12 || force_exhaustive) {
    const u32 n = static_cast<u32>(model.operand_count());
    for (u32 a = 0; a < n; ++a)
      for (u32 b = a + 1; b < n; ++b)
        if (model.evaluate(a, b) != model.evaluate(b, a)) return false;
    return true;
  }
  SplitMix64 rng(kCommutativitySampleSeed);
  const u32 mask = width_mask(m);
  for (u64 i = 0; i < (u64{1} << 24); ++i) {
    const u64 r = rng.next();
    const u32 a = static_cast<u32>(r) & mask;
    const u32 b = static_cast<u32>(r >> 32) & mask;
    if (model.evaluate(a, b) != model.evaluate(b, a)) return false;
  }
  return true;  // probably commutative
}

std::string u128_to_string(u128 v) {
  if (v == 0) return "0";
  std::string out;
  while (v > 0) {
    out.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

u128 u128_from_string(const std::string& s) {
  u128 v = 0;
  if (s.empty()) throw std::invalid_argument("empty integer string");
  for (char c : s) {
    if (c < '0' || c > '9') throw std::invalid_argument("bad digit in integer string");
    v = v * 10 + static_cast<unsigned>(c - '0');
  }
  return v;
}

u64 fnv1a64(const void* data, std::size_t size) {
  const auto* p = static_cast<const unsigned char*>(data);
  u64 h = 0xcbf29ce484222325ULL;
  for (std::size_t i = 0; i < size; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string fnv1a64_hex(const void* data, std::size_t size) {
  static const char* digits = "0123456789abcdef";
  u64 h = fnv1a64(data, size);
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4) out[static_cast<size_t>(i)] = digits[h & 0xf];
  return out;
}

}  // namespace axswap
