#include "axswap/trace.hpp"

#include <array>
#include <fstream>

namespace axswap {

std::vector<RawPair> OperandTrace::pairs_for_parts(const WideMulConfig& cfg) const {
  std::vector<RawPair> out;
  for (std::size_t i = 0; i < pairs.size(); ++i)
    if (cfg.approximates(static_cast<WidePart>(part_labels[i]))) out.push_back(pairs[i]);
  return out;
}

namespace {
constexpr std::array<char, 4> kMagic = {'A', 'X', 'T', 'R'};
constexpr std::size_t kHeaderBytes = 16;
}  // namespace

void write_trace(const OperandTrace& trace, const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw FormatError("cannot open for writing: " + path.string());
  std::array<char, kHeaderBytes> header{};
  std::copy(kMagic.begin(), kMagic.end(), header.begin());
  header[4] = static_cast<char>(kAxtrVersion & 0xff);
  header[5] = static_cast<char>(kAxtrVersion >> 8);
  header[6] = static_cast<char>(trace.width);
  header[7] = static_cast<char>(trace.signedness);
  u64 count = trace.pairs.size();
  for (int i = 0; i < 8; ++i, count >>= 8) header[8 + i] = static_cast<char>(count & 0xff);
  f.write(header.data(), header.size());

  const std::size_t op_bytes = static_cast<std::size_t>((trace.width + 7) / 8);
  std::vector<char> rec(2 * op_bytes + 1);
  for (std::size_t i = 0; i < trace.pairs.size(); ++i) {
    u32 a = trace.pairs[i].a, b = trace.pairs[i].b;
    for (std::size_t k = 0; k < op_bytes; ++k, a >>= 8) rec[k] = static_cast<char>(a & 0xff);
    for (std::size_t k = 0; k < op_bytes; ++k, b >>= 8) rec[op_bytes + k] = static_cast<char>(b & 0xff);
    rec[2 * op_bytes] = static_cast<char>(trace.part_labels[i]);
    f.write(rec.data(), static_cast<std::streamsize>(rec.size()));
  }
  if (!f) throw FormatError("short write: " + path.string());
}

OperandTrace read_trace(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw FormatError("cannot open: " + path.string());
  std::array<char, kHeaderBytes> header{};
  if (!f.read(header.data(), header.size())) throw FormatError("truncated trace header: " + path.string());
  if (!std::equal(kMagic.begin(), kMagic.end(), header.begin()))
    throw FormatError("bad magic, expected AXTR: " + path.string());
  const u16 version = static_cast<u8>(header[4]) | static_cast<u16>(static_cast<u8>(header[5])) << 8;
  if (version != kAxtrVersion) throw FormatError("unsupported trace version: " + path.string());

  OperandTrace trace;
  trace.width = static_cast<u8>(header[6]);
  if (trace.width < 2 || trace.width > 16) throw FormatError("bad trace width: " + path.string());
  trace.signedness = static_cast<Signedness>(static_cast<u8>(header[7]));
  u64 count = 0;
  for (int i = 7; i >= 0; --i) count = count << 8 | static_cast<u8>(header[8 + i]);

  const std::size_t op_bytes = static_cast<std::size_t>((trace.width + 7) / 8);
  std::vector<char> rec(2 * op_bytes + 1);
  trace.pairs.reserve(count);
  trace.part_labels.reserve(count);
  for (u64 i = 0; i < count; ++i) {
    if (!f.read(rec.data(), static_cast<std::streamsize>(rec.size())))
      throw FormatError("truncated trace record " + std::to_string(i) + ": " + path.string());
    u32 a = 0, b = 0;
    for (std::size_t k = op_bytes; k-- > 0;) a = a << 8 | static_cast<u8>(rec[k]);
    for (std::size_t k = op_bytes; k-- > 0;) b = b << 8 | static_cast<u8>(rec[op_bytes + k]);
    trace.pairs.push_back({a, b});
    trace.part_labels.push_back(static_cast<u8>(rec[2 * op_bytes]));
  }
  return trace;
}

}  // namespace axswap
