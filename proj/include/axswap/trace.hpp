#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "axswap/common.hpp"
#include "axswap/widearith.hpp"

namespace axswap {

/// Ordered record of operand pairs observed at the sub-multipliers of an
/// application run, labeled by decomposition part.
struct OperandTrace {
  int width = 16;
  Signedness signedness = Signedness::Signed;
  std::string source;  // free-form label, e.g. "sobel"
  std::vector<RawPair> pairs;
  std::vector<u8> part_labels;  // WidePart per pair

  std::vector<RawPair> pairs_for_parts(const WideMulConfig& cfg) const;  // approximated parts only
};

// AXTR trace file: 16-byte header (magic "AXTR", version u16 LE, width u8,
// signedness u8, pair count u64 LE) followed by one record per pair:
// operand a, operand b (ceil(M/8) little-endian bytes each) and a part-label
// byte.
inline constexpr u16 kAxtrVersion = 1;

void write_trace(const OperandTrace& trace, const std::filesystem::path& path);
OperandTrace read_trace(const std::filesystem::path& path);

/// TraceSink that appends every record to an OperandTrace.
class RecordingSink : public TraceSink {
 public:
  explicit RecordingSink(OperandTrace& out) : out_(out) {}
  void record(WidePart part, u32 a_raw, u32 b_raw) override {
    out_.pairs.push_back({a_raw, b_raw});
    out_.part_labels.push_back(static_cast<u8>(part));
  }

 private:
  OperandTrace& out_;
};

}  // namespace axswap
