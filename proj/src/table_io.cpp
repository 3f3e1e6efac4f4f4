#include "axswap/table_io.hpp"

#include <array>
#include <fstream>
#include <istream>
#include <ostream>

namespace axswap {

namespace {
constexpr std::array<char, 4> kMagic = {'A', 'X', 'T', 'T'};
constexpr std::size_t kHeaderBytes = 16;

[[noreturn]] void format_fail(const std::string& what, std::size_t byte_offset) {
  throw FormatError(what + " (byte offset " + std::to_string(byte_offset) + ")");
}
}  // namespace

std::size_t axtt_entry_bytes(int width) { return static_cast<std::size_t>((2 * width + 7) / 8); }

std::size_t axtt_file_size(int width) {
  return kHeaderBytes + (std::size_t{1} << (2 * width)) * axtt_entry_bytes(width);
}

void dump_truth_table(const MultiplierModel& model, std::ostream& out) {
  const int m = model.width();
  if (m > kAxttMaxWidth) throw CapacityError("truth-table dump limited to width <= " + std::to_string(kAxttMaxWidth));
  std::array<char, kHeaderBytes> header{};
  std::copy(kMagic.begin(), kMagic.end(), header.begin());
  header[4] = static_cast<char>(kAxttVersion & 0xff);
  header[5] = static_cast<char>(kAxttVersion >> 8);
  header[6] = static_cast<char>(m);
  header[7] = static_cast<char>(model.signedness());
  out.write(header.data(), header.size());

  const std::size_t entry_bytes = axtt_entry_bytes(m);
  const u32 side = static_cast<u32>(model.operand_count());
  std::vector<char> buf;
  buf.reserve(static_cast<std::size_t>(side) * entry_bytes);
  for (u32 a = 0; a < side; ++a) {
    buf.clear();
    for (u32 b = 0; b < side; ++b) {
      u32 e = model.evaluate(a, b);
      for (std::size_t i = 0; i < entry_bytes; ++i, e >>= 8) buf.push_back(static_cast<char>(e & 0xff));
    }
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  }
  if (!out) throw FormatError("short write while dumping truth table");
}

void dump_truth_table(const MultiplierModel& model, const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw FormatError("cannot open for writing: " + path.string());
  dump_truth_table(model, f);
}

MultiplierModel load_truth_table(std::istream& in, int width, Signedness s, std::size_t stream_size) {
  if (width > kAxttMaxWidth) throw CapacityError("truth-table load limited to width <= " + std::to_string(kAxttMaxWidth));
  const std::size_t expected = axtt_file_size(width);
  if (stream_size != expected)
    format_fail("truth-table size mismatch: expected " + std::to_string(expected) + " bytes, got " +
                    std::to_string(stream_size),
                stream_size < kHeaderBytes ? stream_size : kHeaderBytes);

  std::array<char, kHeaderBytes> header{};
  if (!in.read(header.data(), header.size())) format_fail("truncated header", 0);
  if (!std::equal(kMagic.begin(), kMagic.end(), header.begin())) format_fail("bad magic, expected AXTT", 0);
  const u16 version = static_cast<u8>(header[4]) | static_cast<u16>(static_cast<u8>(header[5])) << 8;
  if (version != kAxttVersion) format_fail("unsupported format version " + std::to_string(version), 4);
  const int file_width = static_cast<u8>(header[6]);
  if (file_width != width)
    format_fail("width mismatch: file declares " + std::to_string(file_width) + ", expected " + std::to_string(width),
                6);
  const int file_sign = static_cast<u8>(header[7]);
  if (file_sign != static_cast<int>(s)) format_fail("signedness mismatch", 7);

  const std::size_t entry_bytes = axtt_entry_bytes(width);
  const u64 count = u64{1} << (2 * width);
  const u32 out_mask = width_mask(2 * width);
  std::vector<u32> entries(count);
  std::vector<char> buf(entry_bytes * 4096);
  u64 idx = 0;
  while (idx < count) {
    const u64 take = std::min<u64>(4096, count - idx);
    if (!in.read(buf.data(), static_cast<std::streamsize>(take * entry_bytes)))
      format_fail("truncated entry block", kHeaderBytes + idx * entry_bytes);
    for (u64 k = 0; k < take; ++k, ++idx) {
      u32 e = 0;
      for (std::size_t i = entry_bytes; i-- > 0;) e = e << 8 | static_cast<u8>(buf[k * entry_bytes + i]);
      if (e & ~out_mask) format_fail("entry exceeds 2M bits", kHeaderBytes + idx * entry_bytes);
      entries[idx] = e;
    }
  }
  return MultiplierModel::truth_table(width, s, std::move(entries));
}

std::pair<int, Signedness> peek_axtt_header(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw FormatError("cannot open: " + path.string());
  std::array<char, kHeaderBytes> header{};
  if (!f.read(header.data(), header.size())) format_fail("truncated header", 0);
  if (!std::equal(kMagic.begin(), kMagic.end(), header.begin())) format_fail("bad magic, expected AXTT", 0);
  const int width = static_cast<u8>(header[6]);
  if (width < 2 || width > 16) format_fail("bad width " + std::to_string(width), 6);
  const int sign = static_cast<u8>(header[7]);
  if (sign != 0 && sign != 1) format_fail("bad signedness byte", 7);
  return {width, static_cast<Signedness>(sign)};
}

MultiplierModel load_truth_table(const std::filesystem::path& path, int width, Signedness s) {
  std::error_code ec;
  const auto size = std::filesystem::file_size(path, ec);
  if (ec) throw FormatError("cannot stat: " + path.string());
  std::ifstream f(path, std::ios::binary);
  if (!f) throw FormatError("cannot open: " + path.string());
  return load_truth_table(f, width, s, static_cast<std::size_t>(size));
}

MultiplierModel tabulate(const MultiplierModel& model) {
  const int m = model.width();
  if (m > kAxttMaxWidth) throw CapacityError("tabulate limited to width <= " + std::to_string(kAxttMaxWidth));
  const u32 side = static_cast<u32>(model.operand_count());
  std::vector<u32> entries(model.pair_count());
  for (u32 a = 0; a < side; ++a)
    for (u32 b = 0; b < side; ++b) entries[(static_cast<size_t>(a) << m) | b] = model.evaluate(a, b);
  return MultiplierModel::truth_table(m, model.signedness(), std::move(entries));
}

}  // namespace axswap
