#include "axswap/widearith.hpp"

#include <cmath>

namespace axswap {

std::string part_name(WidePart p) {
  switch (p) {
    case WidePart::HI: return "HI";
    case WidePart::MD1: return "MD1";
    case WidePart::MD2: return "MD2";
    case WidePart::LO: return "LO";
  }
  return "?";
}

std::optional<WidePart> part_from_name(const std::string& name) {
  for (WidePart p : kAllParts)
    if (part_name(p) == name) return p;
  return std::nullopt;
}

WideMulConfig WideMulConfig::uniform(const MultiplierModel& model, ApproxSet set, ShiftMode mode) {
  WideMulConfig cfg{model.width(), {model, model, model, model}, set, {}, mode};
  cfg.validate();
  return cfg;
}

WideMulConfig WideMulConfig::uniform_custom(const MultiplierModel& model, std::set<WidePart> parts, ShiftMode mode) {
  WideMulConfig cfg{model.width(), {model, model, model, model}, ApproxSet::Custom, std::move(parts), mode};
  cfg.validate();
  return cfg;
}

WideMulConfig WideMulConfig::exact_baseline(int half_width) {
  const MultiplierModel exact = MultiplierModel::exact(half_width, Signedness::Signed);
  WideMulConfig cfg{half_width, {exact, exact, exact, exact}, ApproxSet::Custom, {}, ShiftMode::ExactFit};
  cfg.validate();
  return cfg;
}

bool WideMulConfig::approximates(WidePart p) const {
  switch (approx_set) {
    case ApproxSet::All: return true;
    case ApproxSet::MdLo: return p != WidePart::HI;
    case ApproxSet::Custom: return custom_parts.contains(p);
  }
  return false;
}

void WideMulConfig::validate() const {
  if (half_width < 2 || half_width > 16) throw std::invalid_argument("half width must be in [2, 16]");
  for (WidePart p : kAllParts) {
    const MultiplierModel& m = model_for(p);
    if (m.width() != half_width) throw std::invalid_argument("part model width does not match half width");
    if (m.signedness() != Signedness::Signed)
      throw std::invalid_argument("part models must be signed (" + part_name(p) + " is not)");
  }
}

namespace {

/// Precise sub-multipliers used for parts outside the approx set.
const MultiplierModel& exact_signed_model(int width) {
  static const std::vector<MultiplierModel> models = [] {
    std::vector<MultiplierModel> v;
    for (int w = 2; w <= 16; ++w) v.push_back(MultiplierModel::exact(w, Signedness::Signed));
    return v;
  }();
  return models[static_cast<std::size_t>(width - 2)];
}

struct PartInput {
  u32 a_raw;  // operand as presented to the n-bit sub-multiplier
  u32 b_raw;
  int post_shift;  // left shift compensating the low-half right shifts
};

i64 run_part(const MultiplierModel& model, WidePart part, const PartInput& in, const SwapDecision& decision,
             MulHooks* hooks) {
  if (hooks && hooks->trace) hooks->trace->record(part, in.a_raw, in.b_raw);
  i64 value;
  if (std::holds_alternative<OracleTag>(decision)) {
    const i64 exact = model.exact_product(in.a_raw, in.b_raw);
    const i64 fwd = model.product_value(model.evaluate(in.a_raw, in.b_raw));
    const i64 rev = model.product_value(model.evaluate(in.b_raw, in.a_raw));
    const i64 e_fwd = fwd > exact ? fwd - exact : exact - fwd;
    const i64 e_rev = rev > exact ? rev - exact : exact - rev;
    value = e_fwd <= e_rev ? fwd : rev;
  } else if (const SwapPolicy* policy = std::get_if<SwapPolicy>(&decision)) {
    const RawPair eff = apply_policy_unchecked(*policy, in.a_raw, in.b_raw);
    value = model.product_value(model.evaluate(eff.a, eff.b));
  } else {
    value = model.product_value(model.evaluate(in.a_raw, in.b_raw));
  }
  return value << in.post_shift;
}

}  // namespace

i64 wide_multiply(const WideMulConfig& cfg, i64 a, i64 b, const SwapDecision& decision, MulHooks* hooks) {
  const int n = cfg.half_width;
  const int w = 2 * n;
  const i64 lo_bound = -(i64{1} << (w - 1)), hi_bound = (i64{1} << (w - 1)) - 1;
  if (a < lo_bound || a > hi_bound || b < lo_bound || b > hi_bound)
    throw std::invalid_argument("operand does not fit the configured 2n-bit width");
  if (const SwapPolicy* policy = std::get_if<SwapPolicy>(&decision))
    if (policy->bit_index < 0 || policy->bit_index >= n)
      throw std::invalid_argument("policy bit index out of range for half width");

  const u32 n_mask = width_mask(n);
  const u32 a_lo = static_cast<u32>(static_cast<u64>(a)) & n_mask;
  const u32 b_lo = static_cast<u32>(static_cast<u64>(b)) & n_mask;
  const u32 a_hi = static_cast<u32>(static_cast<u64>(a) >> n) & n_mask;
  const u32 b_hi = static_cast<u32>(static_cast<u64>(b) >> n) & n_mask;
  const i64 a_hi_val = decode_value(a_hi, n, Signedness::Signed);
  const i64 b_hi_val = decode_value(b_hi, n, Signedness::Signed);

  // Parts outside the approx set use Exact: in ExactFit mode they bypass the
  // n-bit multiplier entirely, in Fidelity mode they run a precise n-bit
  // sub-multiplier behind the same one-position low-half shift.
  auto part_term = [&](WidePart part, const PartInput& in, i64 exact_value) {
    if (cfg.approximates(part)) return run_part(cfg.model_for(part), part, in, decision, hooks);
    if (cfg.shift_mode == ShiftMode::ExactFit) return exact_value;
    return run_part(exact_signed_model(n), part, in, NoSwapTag{}, hooks);
  };

  const i64 hi = part_term(WidePart::HI, {a_hi, b_hi, 0}, a_hi_val * b_hi_val);
  const i64 md1 = part_term(WidePart::MD1, {a_hi, b_lo >> 1, 1}, a_hi_val * static_cast<i64>(b_lo));
  const i64 md2 = part_term(WidePart::MD2, {a_lo >> 1, b_hi, 1}, static_cast<i64>(a_lo) * b_hi_val);
  const i64 lo = part_term(WidePart::LO, {a_lo >> 1, b_lo >> 1, 2}, static_cast<i64>(a_lo) * static_cast<i64>(b_lo));

  // reconstruction wraps modulo 2^64
  const u64 sum = (static_cast<u64>(hi) << (2 * n)) + ((static_cast<u64>(md1) + static_cast<u64>(md2)) << n) +
                  static_cast<u64>(lo);
  return static_cast<i64>(sum);
}

Fx32 fx_from_real(double v) {
  if (!(v >= kFxMin && v <= kFxMax)) throw std::range_error("value outside the Q16.16 range");
  const double scaled = std::nearbyint(v * 65536.0);  // nearest-even under the default rounding mode
  if (scaled < static_cast<double>(INT32_MIN) || scaled > static_cast<double>(INT32_MAX))
    throw std::range_error("value outside the Q16.16 range");
  return Fx32{static_cast<i32>(scaled)};
}

namespace {
i32 saturate_i32(i64 v, MulHooks* hooks) {
  if (v > INT32_MAX) {
    if (hooks && hooks->saturations) ++*hooks->saturations;
    return INT32_MAX;
  }
  if (v < INT32_MIN) {
    if (hooks && hooks->saturations) ++*hooks->saturations;
    return INT32_MIN;
  }
  return static_cast<i32>(v);
}
}  // namespace

Fx32 fx_mul(const WideMulConfig& cfg, Fx32 x, Fx32 y, const SwapDecision& decision, MulHooks* hooks) {
  if (cfg.half_width != 16) throw std::invalid_argument("Q16.16 multiplication requires half width 16");
  const i64 product = wide_multiply(cfg, x.raw, y.raw, decision, hooks);
  return Fx32{saturate_i32(product >> kFxFracBits, hooks)};
}

Fx32 fx_add(Fx32 x, Fx32 y, MulHooks* hooks) {
  return Fx32{saturate_i32(static_cast<i64>(x.raw) + y.raw, hooks)};
}

Fx32 fx_sub(Fx32 x, Fx32 y, MulHooks* hooks) {
  return Fx32{saturate_i32(static_cast<i64>(x.raw) - y.raw, hooks)};
}

}  // namespace axswap
