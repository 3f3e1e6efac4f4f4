#pragma once

#include <array>
#include <optional>
#include <set>
#include <string>

#include "axswap/model.hpp"
#include "axswap/policy.hpp"

namespace axswap {

/// Sub-products of the modular 2n-bit multiplication
/// a*b = HI*2^(2n) + (MD1 + MD2)*2^n + LO with
/// HI = A_H*B_H, MD1 = A_H*B_L, MD2 = A_L*B_H, LO = A_L*B_L.
enum class WidePart : u8 { HI = 0, MD1 = 1, MD2 = 2, LO = 3 };

inline constexpr std::array<WidePart, 4> kAllParts = {WidePart::HI, WidePart::MD1, WidePart::MD2, WidePart::LO};
std::string part_name(WidePart p);
std::optional<WidePart> part_from_name(const std::string& name);

enum class ApproxSet : u8 { All, MdLo, Custom };

/// How unsigned low halves are fed to signed n-bit sub-multipliers.
/// Fidelity: low-half operands are logically shifted right by one position
/// before the sub-multiplication and the result is shifted back (the dropped
/// LSB is an accepted error source). ExactFit: parts NOT in the approx set
/// bypass the sub-multiplier and use full-precision arithmetic instead, which
/// restores the exact decomposition identity when nothing is approximated.
enum class ShiftMode : u8 { Fidelity, ExactFit };

/// Observer for every sub-multiplication, fed the raw operand pair exactly as
/// presented to the part's multiplier (after low-half shifting, before any
/// swap). Parts that bypass the sub-multiplier (ExactFit non-approximated
/// parts) are not reported.
class TraceSink {
 public:
  virtual ~TraceSink() = default;
  virtual void record(WidePart part, u32 a_raw, u32 b_raw) = 0;
};

struct MulHooks {
  TraceSink* trace = nullptr;
  u64* saturations = nullptr;  // incremented by fx_mul on clamping
};

/// Assignment of sub-multiplier models and approximation flags to the parts
/// of the decomposition. Part models must be signed and of width n.
struct WideMulConfig {
  int half_width = 16;  // n; operands are 2n-bit signed
  std::array<MultiplierModel, 4> part_models;
  ApproxSet approx_set = ApproxSet::MdLo;
  std::set<WidePart> custom_parts;  // used when approx_set == Custom
  ShiftMode shift_mode = ShiftMode::Fidelity;

  /// Same model for every part (each part's approximation flag still applies).
  static WideMulConfig uniform(const MultiplierModel& model, ApproxSet set, ShiftMode mode);
  static WideMulConfig uniform_custom(const MultiplierModel& model, std::set<WidePart> parts, ShiftMode mode);
  /// Exact everywhere with the identity-restoring shift mode (the plain
  /// fixed-point baseline).
  static WideMulConfig exact_baseline(int half_width = 16);

  bool approximates(WidePart p) const;
  const MultiplierModel& model_for(WidePart p) const { return part_models[static_cast<std::size_t>(p)]; }
  void validate() const;
};

/// Modular 2n-bit multiplication. Operands must be representable in 2n signed
/// bits; the reconstruction sum wraps modulo 2^64 (two's complement).
/// The swap decision applies to approximated parts only.
i64 wide_multiply(const WideMulConfig& cfg, i64 a, i64 b, const SwapDecision& decision = NoSwapTag{},
                  MulHooks* hooks = nullptr);

/// Q16.16 signed fixed-point word.
struct Fx32 {
  i32 raw = 0;
  friend bool operator==(const Fx32&, const Fx32&) = default;
};

inline constexpr int kFxFracBits = 16;
inline constexpr double kFxMin = -32768.0;
inline constexpr double kFxMax = 32768.0 - 1.0 / 65536.0;

/// Round-to-nearest-even quantization onto the 2^-16 grid.
Fx32 fx_from_real(double v);
inline double fx_to_real(Fx32 x) { return static_cast<double>(x.raw) / 65536.0; }
inline Fx32 fx_from_int(int v) { return Fx32{static_cast<i32>(v) << kFxFracBits}; }

/// Q16.16 product: the 64-bit wide product arithmetic-shifted right by 16
/// (truncation toward -inf), saturated to the Q16.16 range.
Fx32 fx_mul(const WideMulConfig& cfg, Fx32 x, Fx32 y, const SwapDecision& decision = NoSwapTag{},
            MulHooks* hooks = nullptr);

/// Saturating Q16.16 sum/difference (exact unless clamped).
Fx32 fx_add(Fx32 x, Fx32 y, MulHooks* hooks = nullptr);
Fx32 fx_sub(Fx32 x, Fx32 y, MulHooks* hooks = nullptr);
inline Fx32 fx_abs(Fx32 x) { return Fx32{x.raw == INT32_MIN ? INT32_MAX : (x.raw < 0 ? -x.raw : x.raw)}; }

}  // namespace axswap
