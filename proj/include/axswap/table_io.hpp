#pragma once

#include <filesystem>
#include <iosfwd>

#include "axswap/model.hpp"

namespace axswap {

// AXTT truth-table file: 16-byte header (magic "AXTT", format version u16 LE,
// width u8, signedness u8, 8 reserved zero bytes) followed by 2^(2M)
// little-endian entries of ceil(2M/8) bytes each, indexed (a_raw << M) | b_raw.

inline constexpr u16 kAxttVersion = 1;
inline constexpr int kAxttMaxWidth = 12;  // 2^(2M) entries; 12 -> 64 MiB in memory

std::size_t axtt_entry_bytes(int width);
std::size_t axtt_file_size(int width);

/// Writes the model's full truth table. Guarded at width <= kAxttMaxWidth.
void dump_truth_table(const MultiplierModel& model, const std::filesystem::path& path);
void dump_truth_table(const MultiplierModel& model, std::ostream& out);

/// Width and signedness declared by an AXTT file header.
std::pair<int, Signedness> peek_axtt_header(const std::filesystem::path& path);

/// Loads an AXTT file; the declared width/signedness must match the header.
/// Length and entry-range violations raise FormatError with the byte offset.
MultiplierModel load_truth_table(const std::filesystem::path& path, int width, Signedness s);
MultiplierModel load_truth_table(std::istream& in, int width, Signedness s, std::size_t stream_size);

/// Materializes any model as a TruthTable model (same guard as dumping).
MultiplierModel tabulate(const MultiplierModel& model);

}  // namespace axswap
