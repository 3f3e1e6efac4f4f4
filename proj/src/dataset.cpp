#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "axswap/apps.hpp"

namespace axswap {

std::string dataset_kind_name(DatasetKind kind) { return kind == DatasetKind::Train ? "train" : "test"; }

namespace {

u8 clamp255(double v) { return static_cast<u8>(std::clamp(std::lround(v), 0L, 255L)); }

// Fixed pattern cards. Train uses the even variants, test the odd ones, so
// the corpora stay disjoint by construction.
GrayImage gray_card(int variant, int size) {
  GrayImage img = GrayImage::blank(size, size);
  const double cx = size / 2.0, cy = size / 2.0;
  for (int r = 0; r < size; ++r) {
    for (int c = 0; c < size; ++c) {
      const double dx = c - cx, dy = r - cy;
      const double rad = std::sqrt(dx * dx + dy * dy);
      double v = 0;
      switch (variant % 4) {
        case 0: v = 127.5 + 127.5 * std::sin(rad * 0.55); break;                       // rings
        case 1: v = (c / 6 + r / 9) % 2 ? 220 : 40; break;                             // slanted bars
        case 2: v = 127.5 + 110.0 * std::sin(c * 0.35) * std::cos(r * 0.21); break;    // plaid
        default: v = std::fmod(std::atan2(dy, dx) + std::numbers::pi, 2 * std::numbers::pi) * 40.0; break;  // sweep
      }
      img.at(r, c) = clamp255(v);
    }
  }
  return img;
}

GrayImage gray_texture(SplitMix64& rng, int size) {
  GrayImage img = GrayImage::blank(size, size);
  const int cell = 4 + static_cast<int>(rng.below(5));
  const double gx = rng.unit() * 2.0, gy = rng.unit() * 2.0;
  const double amp = 20.0 + rng.unit() * 40.0;
  for (int r = 0; r < size; ++r)
    for (int c = 0; c < size; ++c) {
      const double checker = ((r / cell + c / cell) % 2) ? amp : -amp;
      const double grad = gx * c + gy * r;
      const double noise = (rng.unit() - 0.5) * 60.0;
      img.at(r, c) = clamp255(110.0 + checker + grad + noise);
    }
  return img;
}

RgbImage color_card(int variant, int size) {
  RgbImage img = RgbImage::blank(size, size);
  // five-region card: four quadrant colors plus a center disc
  static constexpr u8 palette[2][5][3] = {
      {{200, 40, 40}, {40, 170, 60}, {50, 60, 200}, {230, 210, 60}, {240, 240, 240}},
      {{20, 20, 20}, {230, 120, 30}, {140, 40, 170}, {60, 200, 200}, {250, 250, 210}},
  };
  const auto& pal = palette[variant % 2];
  const double cx = size / 2.0, cy = size / 2.0;
  for (int r = 0; r < size; ++r)
    for (int c = 0; c < size; ++c) {
      const double dx = c - cx, dy = r - cy;
      int region = (r < size / 2 ? 0 : 2) + (c < size / 2 ? 0 : 1);
      if (dx * dx + dy * dy < (size / 5.0) * (size / 5.0)) region = 4;
      for (int ch = 0; ch < 3; ++ch) img.px(r, c)[ch] = pal[region][ch];
    }
  return img;
}

RgbImage color_texture(SplitMix64& rng, int size) {
  RgbImage img = RgbImage::blank(size, size);
  u8 c0[3], c1[3];
  for (int ch = 0; ch < 3; ++ch) {
    c0[ch] = static_cast<u8>(rng.below(256));
    c1[ch] = static_cast<u8>(rng.below(256));
  }
  for (int r = 0; r < size; ++r)
    for (int c = 0; c < size; ++c) {
      const double t = static_cast<double>(r + c) / (2.0 * size - 2);
      for (int ch = 0; ch < 3; ++ch) {
        const double base = c0[ch] + t * (static_cast<double>(c1[ch]) - c0[ch]);
        img.px(r, c)[ch] = clamp255(base + (rng.unit() - 0.5) * 36.0);
      }
    }
  return img;
}

// Multi-tone signal with off-bin frequencies plus a broadband noise floor, so
// every spectrum component carries energy well above the Q16.16 grid.
std::vector<FxComplex> make_signal(SplitMix64& rng, std::size_t length) {
  const int tones = 3 + static_cast<int>(rng.below(4));
  std::vector<double> freq(static_cast<size_t>(tones)), amp(static_cast<size_t>(tones)), phase(static_cast<size_t>(tones));
  for (int t = 0; t < tones; ++t) {
    freq[static_cast<size_t>(t)] = (1.0 + rng.below(length / 4)) + 0.25 + rng.unit() * 0.5;  // off-bin
    amp[static_cast<size_t>(t)] = (0.25 + rng.unit() * 0.55) / tones;
    phase[static_cast<size_t>(t)] = rng.unit() * 2 * std::numbers::pi;
  }
  std::vector<FxComplex> out(length);
  for (std::size_t i = 0; i < length; ++i) {
    double re = (rng.unit() - 0.5) * 0.2;
    double im = (rng.unit() - 0.5) * 0.2;
    for (int t = 0; t < tones; ++t) {
      const double ang = 2 * std::numbers::pi * freq[static_cast<size_t>(t)] * static_cast<double>(i) / static_cast<double>(length) +
                         phase[static_cast<size_t>(t)];
      re += amp[static_cast<size_t>(t)] * std::cos(ang);
      im += amp[static_cast<size_t>(t)] * std::sin(ang);
    }
    out[i] = {fx_from_real(re), fx_from_real(im)};
  }
  return out;
}

constexpr int kGraySize = 64;
constexpr int kColorSize = 32;
constexpr std::size_t kSignalLength = 1024;

std::string file_tag(DatasetKind kind, const char* stem, int index) {
  return std::string(stem) + "_" + dataset_kind_name(kind) + std::to_string(index);
}

// ---- in-memory serializations (hashed for the manifest) ----

std::string pgm_bytes(const GrayImage& img) {
  std::ostringstream os;
  os << "P5\n" << img.width << " " << img.height << "\n255\n";
  os.write(reinterpret_cast<const char*>(img.pixels.data()), static_cast<std::streamsize>(img.pixels.size()));
  return os.str();
}

std::string ppm_bytes(const RgbImage& img) {
  std::ostringstream os;
  os << "P6\n" << img.width << " " << img.height << "\n255\n";
  os.write(reinterpret_cast<const char*>(img.pixels.data()), static_cast<std::streamsize>(img.pixels.size()));
  return os.str();
}

std::string axsg_bytes(std::span<const FxComplex> signal) {
  std::string out;
  out.reserve(16 + signal.size() * 8);
  out += "AXSG";
  out.push_back(1);  // version u16 LE
  out.push_back(0);
  out.push_back(0);  // reserved
  out.push_back(0);
  u64 count = signal.size();
  for (int i = 0; i < 8; ++i, count >>= 8) out.push_back(static_cast<char>(count & 0xff));
  for (const FxComplex& s : signal) {
    u32 re = static_cast<u32>(s.re.raw), im = static_cast<u32>(s.im.raw);
    for (int i = 0; i < 4; ++i, re >>= 8) out.push_back(static_cast<char>(re & 0xff));
    for (int i = 0; i < 4; ++i, im >>= 8) out.push_back(static_cast<char>(im & 0xff));
  }
  return out;
}

}  // namespace

Dataset generate_dataset(DatasetKind kind, u64 seed) {
  Dataset ds;
  ds.kind = kind;
  ds.seed = seed;
  const int base_variant = kind == DatasetKind::Train ? 0 : 1;
  // distinct streams per kind and per content class
  const u64 kind_salt = kind == DatasetKind::Train ? 0x7261696eULL : 0x74657374ULL;
  SplitMix64 gray_rng(seed * 0x9e3779b97f4a7c15ULL ^ kind_salt ^ 0x01);
  SplitMix64 color_rng(seed * 0x9e3779b97f4a7c15ULL ^ kind_salt ^ 0x02);
  SplitMix64 signal_rng(seed * 0x9e3779b97f4a7c15ULL ^ kind_salt ^ 0x03);

  ds.gray_images.emplace_back(file_tag(kind, "sobel_card", 0) + ".pgm", gray_card(base_variant, kGraySize));
  ds.gray_images.emplace_back(file_tag(kind, "sobel_card", 1) + ".pgm", gray_card(base_variant + 2, kGraySize));
  ds.gray_images.emplace_back(file_tag(kind, "sobel_tex", 0) + ".pgm", gray_texture(gray_rng, kGraySize));
  ds.gray_images.emplace_back(file_tag(kind, "sobel_tex", 1) + ".pgm", gray_texture(gray_rng, kGraySize));

  ds.color_images.emplace_back(file_tag(kind, "kmeans_card", 0) + ".ppm", color_card(base_variant, kColorSize));
  ds.color_images.emplace_back(file_tag(kind, "kmeans_tex", 0) + ".ppm", color_texture(color_rng, kColorSize));

  ds.signals.emplace_back(file_tag(kind, "fft_sig", 0) + ".axsg", make_signal(signal_rng, kSignalLength));
  ds.signals.emplace_back(file_tag(kind, "fft_sig", 1) + ".axsg", make_signal(signal_rng, kSignalLength));
  return ds;
}

std::string dataset_manifest_json(const Dataset& ds) {
  std::vector<std::pair<std::string, std::string>> entries;
  for (const auto& [name, img] : ds.gray_images) {
    const std::string bytes = pgm_bytes(img);
    entries.emplace_back(name, fnv1a64_hex(bytes.data(), bytes.size()));
  }
  for (const auto& [name, img] : ds.color_images) {
    const std::string bytes = ppm_bytes(img);
    entries.emplace_back(name, fnv1a64_hex(bytes.data(), bytes.size()));
  }
  for (const auto& [name, sig] : ds.signals) {
    const std::string bytes = axsg_bytes(sig);
    entries.emplace_back(name, fnv1a64_hex(bytes.data(), bytes.size()));
  }
  std::sort(entries.begin(), entries.end());
  nlohmann::json files = nlohmann::json::array();
  for (const auto& [name, hash] : entries) files.push_back({{"name", name}, {"fnv1a64", hash}});
  nlohmann::json j{{"kind", dataset_kind_name(ds.kind)}, {"seed", ds.seed}, {"files", files}};
  return j.dump(2);
}

std::string dataset_manifest_hash(const Dataset& ds) {
  const std::string manifest = dataset_manifest_json(ds);
  return fnv1a64_hex(manifest.data(), manifest.size());
}

void write_dataset(const Dataset& ds, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& [name, img] : ds.gray_images) write_pgm(img, dir / name);
  for (const auto& [name, img] : ds.color_images) write_ppm(img, dir / name);
  for (const auto& [name, sig] : ds.signals) write_signal(sig, dir / name);
  std::ofstream mf(dir / "manifest.json");
  if (!mf) throw FormatError("cannot write manifest under " + dir.string());
  mf << dataset_manifest_json(ds) << "\n";
}

Dataset load_dataset(const std::filesystem::path& dir) {
  std::ifstream mf(dir / "manifest.json");
  if (!mf) throw FormatError("missing manifest.json under " + dir.string());
  nlohmann::json j;
  mf >> j;
  Dataset ds;
  ds.kind = j.at("kind").get<std::string>() == "train" ? DatasetKind::Train : DatasetKind::Test;
  ds.seed = j.at("seed").get<u64>();
  for (const auto& f : j.at("files")) {
    const std::string name = f.at("name").get<std::string>();
    const std::filesystem::path path = dir / name;
    if (name.ends_with(".pgm"))
      ds.gray_images.emplace_back(name, read_pgm(path));
    else if (name.ends_with(".ppm"))
      ds.color_images.emplace_back(name, read_ppm(path));
    else if (name.ends_with(".axsg"))
      ds.signals.emplace_back(name, read_signal(path));
    else
      throw FormatError("unknown dataset file type: " + name);
  }
  return ds;
}

void write_signal(std::span<const FxComplex> signal, const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw FormatError("cannot open for writing: " + path.string());
  const std::string bytes = axsg_bytes(signal);
  f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw FormatError("short write: " + path.string());
}

std::vector<FxComplex> read_signal(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw FormatError("cannot open: " + path.string());
  char header[16];
  if (!f.read(header, sizeof header)) throw FormatError("truncated signal header: " + path.string());
  if (std::string_view(header, 4) != "AXSG") throw FormatError("bad magic, expected AXSG: " + path.string());
  const u16 version = static_cast<u8>(header[4]) | static_cast<u16>(static_cast<u8>(header[5])) << 8;
  if (version != 1) throw FormatError("unsupported signal version: " + path.string());
  u64 count = 0;
  for (int i = 7; i >= 0; --i) count = count << 8 | static_cast<u8>(header[8 + i]);
  std::vector<FxComplex> out(count);
  std::vector<char> buf(count * 8);
  if (!f.read(buf.data(), static_cast<std::streamsize>(buf.size())))
    throw FormatError("truncated signal body: " + path.string());
  for (u64 i = 0; i < count; ++i) {
    u32 re = 0, im = 0;
    for (int k = 3; k >= 0; --k) re = re << 8 | static_cast<u8>(buf[i * 8 + static_cast<u64>(k)]);
    for (int k = 3; k >= 0; --k) im = im << 8 | static_cast<u8>(buf[i * 8 + 4 + static_cast<u64>(k)]);
    out[i] = {Fx32{static_cast<i32>(re)}, Fx32{static_cast<i32>(im)}};
  }
  return out;
}

}  // namespace axswap
