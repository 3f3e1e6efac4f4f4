#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace axswap {

using u8 = std::uint8_t;
using u16 = std::uint16_t;
using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i32 = std::int32_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;

enum class Signedness : u8 { Unsigned = 0, Signed = 1 };
enum class Operand : u8 { A = 0, B = 1 };

/// Raw M-bit encodings of an operand pair (two's complement for signed models).
struct RawPair {
  u32 a = 0;
  u32 b = 0;
  friend bool operator==(const RawPair&, const RawPair&) = default;
};

/// Malformed or truncated binary file (AXTT, AXTR, images, signals).
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A width/size guard was exceeded (heatmap grids, table dumps).
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline u32 width_mask(int width) {
  return width >= 32 ? ~u32{0} : ((u32{1} << width) - 1);
}

/// Numeric value of an M-bit raw encoding.
inline i64 decode_value(u32 raw, int width, Signedness s) {
  if (s == Signedness::Unsigned) return static_cast<i64>(raw);
  const u32 sign_bit = u32{1} << (width - 1);
  if (raw & sign_bit) return static_cast<i64>(raw) - (i64{1} << width);
  return static_cast<i64>(raw);
}

/// M-bit two's-complement raw encoding of a value (wraps modulo 2^width).
inline u32 encode_value(i64 value, int width) {
  return static_cast<u32>(static_cast<u64>(value)) & width_mask(width);
}

inline double u128_to_double(u128 v) {
  const u64 hi = static_cast<u64>(v >> 64);
  const u64 lo = static_cast<u64>(v);
  return static_cast<double>(hi) * 18446744073709551616.0 + static_cast<double>(lo);
}

std::string u128_to_string(u128 v);
u128 u128_from_string(const std::string& s);

/// splitmix64; used everywhere a portable deterministic stream is needed.
struct SplitMix64 {
  u64 state;
  explicit SplitMix64(u64 seed) : state(seed) {}
  u64 next() {
    u64 z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  /// Uniform in [0, bound). Bound must be nonzero.
  u64 below(u64 bound) { return next() % bound; }
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

/// FNV-1a 64-bit; dataset manifests store these as 16-hex-digit strings.
u64 fnv1a64(const void* data, std::size_t size);
std::string fnv1a64_hex(const void* data, std::size_t size);

}  // namespace axswap
