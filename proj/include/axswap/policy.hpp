#pragma once

#include <optional>
#include <string>
#include <variant>

#include "axswap/common.hpp"

namespace axswap {

/// Single-bit swap rule: swap the operand order iff bit `bit_index` of the
/// selected ORIGINAL operand's raw encoding equals `trigger_value`.
struct SwapPolicy {
  Operand operand = Operand::A;
  int bit_index = 0;
  int trigger_value = 0;

  friend bool operator==(const SwapPolicy&, const SwapPolicy&) = default;

  /// Tie-break order: A before B, low bit first, trigger 0 before 1.
  friend bool operator<(const SwapPolicy& x, const SwapPolicy& y) {
    if (x.operand != y.operand) return x.operand < y.operand;
    if (x.bit_index != y.bit_index) return x.bit_index < y.bit_index;
    return x.trigger_value < y.trigger_value;
  }

  std::string describe() const {
    return std::string(operand == Operand::A ? "A" : "B") + ":" + std::to_string(bit_index) + ":" +
           std::to_string(trigger_value);
  }
};

/// Unchecked hot path; the decision reads the original operands only.
inline RawPair apply_policy_unchecked(const SwapPolicy& p, u32 a_raw, u32 b_raw) {
  const u32 word = p.operand == Operand::A ? a_raw : b_raw;
  const bool fire = static_cast<int>(word >> p.bit_index & 1) == p.trigger_value;
  return fire ? RawPair{b_raw, a_raw} : RawPair{a_raw, b_raw};
}

/// Validating form; width is the operand width the policy is applied at.
inline RawPair apply_policy(const SwapPolicy& p, u32 a_raw, u32 b_raw, int width) {
  if (p.bit_index < 0 || p.bit_index >= width) throw std::invalid_argument("policy bit index out of range");
  if (p.trigger_value != 0 && p.trigger_value != 1) throw std::invalid_argument("policy trigger must be 0 or 1");
  return apply_policy_unchecked(p, a_raw, b_raw);
}

/// Orientation decision used by evaluation entry points: keep program order,
/// apply a fixed single-bit policy, or pick the error-minimizing order per
/// multiplication (the theoretical bound).
struct NoSwapTag {
  friend bool operator==(const NoSwapTag&, const NoSwapTag&) = default;
};
struct OracleTag {
  friend bool operator==(const OracleTag&, const OracleTag&) = default;
};
using SwapDecision = std::variant<NoSwapTag, SwapPolicy, OracleTag>;

inline std::string describe(const SwapDecision& d) {
  if (std::holds_alternative<NoSwapTag>(d)) return "noswap";
  if (std::holds_alternative<OracleTag>(d)) return "oracle";
  return std::get<SwapPolicy>(d).describe();
}

}  // namespace axswap
