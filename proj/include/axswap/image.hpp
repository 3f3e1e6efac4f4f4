#pragma once

#include <filesystem>
#include <vector>

#include "axswap/common.hpp"

namespace axswap {

struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<u8> pixels;  // row-major luminance

  u8& at(int row, int col) { return pixels[static_cast<std::size_t>(row) * width + col]; }
  u8 at(int row, int col) const { return pixels[static_cast<std::size_t>(row) * width + col]; }
  static GrayImage blank(int width, int height, u8 fill = 0) {
    return {width, height, std::vector<u8>(static_cast<std::size_t>(width) * height, fill)};
  }
  friend bool operator==(const GrayImage&, const GrayImage&) = default;
};

struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<u8> pixels;  // row-major, 3 bytes per pixel

  u8* px(int row, int col) { return &pixels[(static_cast<std::size_t>(row) * width + col) * 3]; }
  const u8* px(int row, int col) const { return &pixels[(static_cast<std::size_t>(row) * width + col) * 3]; }
  static RgbImage blank(int width, int height) {
    return {width, height, std::vector<u8>(static_cast<std::size_t>(width) * height * 3, 0)};
  }
  friend bool operator==(const RgbImage&, const RgbImage&) = default;
};

/// Rec.601 luma, rounded to nearest; used to score color outputs with SSIM.
GrayImage to_luma(const RgbImage& img);

// Binary PGM (P5) / PPM (P6), maxval 255.
GrayImage read_pgm(const std::filesystem::path& path);
void write_pgm(const GrayImage& img, const std::filesystem::path& path);
RgbImage read_ppm(const std::filesystem::path& path);
void write_ppm(const RgbImage& img, const std::filesystem::path& path);

}  // namespace axswap
