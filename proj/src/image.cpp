#include "axswap/image.hpp"

#include <cmath>
#include <fstream>

namespace axswap {

namespace {

int read_pnm_token(std::istream& in, const std::filesystem::path& path) {
  // whitespace-separated decimal token; '#' starts a comment to end of line
  int c = in.get();
  while (c != EOF && (std::isspace(c) || c == '#')) {
    if (c == '#')
      while (c != EOF && c != '\n') c = in.get();
    c = in.get();
  }
  int value = 0;
  bool any = false;
  while (c != EOF && std::isdigit(c)) {
    value = value * 10 + (c - '0');
    any = true;
    c = in.get();
  }
  if (!any) throw FormatError("malformed PNM header: " + path.string());
  return value;
}

std::vector<u8> read_pnm_body(std::istream& in, std::size_t bytes, const std::filesystem::path& path) {
  std::vector<u8> data(bytes);
  if (!in.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(bytes)))
    throw FormatError("truncated PNM body: " + path.string());
  return data;
}

void check_header(std::istream& in, const char* magic, const std::filesystem::path& path) {
  char m[2];
  if (!in.read(m, 2) || m[0] != magic[0] || m[1] != magic[1])
    throw FormatError(std::string("expected ") + magic + " file: " + path.string());
}

}  // namespace

GrayImage read_pgm(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw FormatError("cannot open: " + path.string());
  check_header(f, "P5", path);
  GrayImage img;
  img.width = read_pnm_token(f, path);
  img.height = read_pnm_token(f, path);
  if (read_pnm_token(f, path) != 255) throw FormatError("only maxval 255 supported: " + path.string());
  img.pixels = read_pnm_body(f, static_cast<std::size_t>(img.width) * img.height, path);
  return img;
}

void write_pgm(const GrayImage& img, const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw FormatError("cannot open for writing: " + path.string());
  f << "P5\n" << img.width << " " << img.height << "\n255\n";
  f.write(reinterpret_cast<const char*>(img.pixels.data()), static_cast<std::streamsize>(img.pixels.size()));
  if (!f) throw FormatError("short write: " + path.string());
}

RgbImage read_ppm(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw FormatError("cannot open: " + path.string());
  check_header(f, "P6", path);
  RgbImage img;
  img.width = read_pnm_token(f, path);
  img.height = read_pnm_token(f, path);
  if (read_pnm_token(f, path) != 255) throw FormatError("only maxval 255 supported: " + path.string());
  img.pixels = read_pnm_body(f, static_cast<std::size_t>(img.width) * img.height * 3, path);
  return img;
}

void write_ppm(const RgbImage& img, const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw FormatError("cannot open for writing: " + path.string());
  f << "P6\n" << img.width << " " << img.height << "\n255\n";
  f.write(reinterpret_cast<const char*>(img.pixels.data()), static_cast<std::streamsize>(img.pixels.size()));
  if (!f) throw FormatError("short write: " + path.string());
}

GrayImage to_luma(const RgbImage& img) {
  GrayImage out = GrayImage::blank(img.width, img.height);
  for (std::size_t i = 0; i < out.pixels.size(); ++i) {
    const u8* p = &img.pixels[i * 3];
    const double y = 0.299 * p[0] + 0.587 * p[1] + 0.114 * p[2];
    out.pixels[i] = static_cast<u8>(std::lround(y));
  }
  return out;
}

}  // namespace axswap
