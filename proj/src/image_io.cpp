// Copyright (c) 2026 The textkernel Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "textkernel/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>

namespace textkernel::io {
namespace {

using raster::BinaryMask;
using raster::Raster;

std::string lower_ext(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext;
}

[[noreturn]] void io_error(const std::filesystem::path& path, const std::string& what) {
  throw Error(ErrorKind::kIo, path.string() + ": " + what);
}

struct FileCloser {
  void operator()(std::FILE* f) const { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::filesystem::path& path, const char* mode) {
  FilePtr f(std::fopen(path.string().c_str(), mode));
  if (!f) io_error(path, "cannot open");
  return f;
}

// PGM header tokens, skipping '#' comments.
bool next_token(std::istream& in, std::string& tok) {
  tok.clear();
  char c = 0;
  while (in.get(c)) {
    if (c == '#') {
      std::string discard;
      std::getline(in, discard);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!tok.empty()) return true;
      continue;
    }
    tok.push_back(c);
  }
  return !tok.empty();
}

Raster read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) io_error(path, "cannot open");
  std::string magic, ws, hs, ms;
  if (!next_token(in, magic) || magic != "P5") io_error(path, "not a binary PGM (P5)");
  if (!next_token(in, ws) || !next_token(in, hs) || !next_token(in, ms)) io_error(path, "truncated PGM header");
  int w = 0, h = 0, maxval = 0;
  try {
    w = std::stoi(ws);
    h = std::stoi(hs);
    maxval = std::stoi(ms);
  } catch (const std::exception&) {
    io_error(path, "malformed PGM header");
  }
  if (w < 1 || h < 1 || w > (1 << 16) || h > (1 << 16)) io_error(path, "unsupported PGM dimensions");
  if (maxval < 1 || maxval > 255) io_error(path, "only 8-bit PGM is supported");
  std::vector<unsigned char> bytes(static_cast<std::size_t>(w) * static_cast<std::size_t>(h));
  in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (in.gcount() != static_cast<std::streamsize>(bytes.size())) io_error(path, "truncated PGM data");
  Raster r(w, h, 1);
  const float scale = 255.0f / static_cast<float>(maxval);
  for (std::size_t i = 0; i < bytes.size(); ++i) r.data[i] = maxval == 255 ? bytes[i] : std::round(bytes[i] * scale);
  return r;
}

std::vector<unsigned char> to_bytes(const Raster& image) {
  if (image.channels != 1) throw Error(ErrorKind::kInvalidInput, "gray writer needs a single-channel raster");
  std::vector<unsigned char> bytes(image.data.size());
  std::transform(image.data.begin(), image.data.end(), bytes.begin(), [](float v) {
    return static_cast<unsigned char>(std::clamp(std::lround(v), 0L, 255L));
  });
  return bytes;
}

void write_pgm(const std::filesystem::path& path, int w, int h, const std::vector<unsigned char>& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) io_error(path, "cannot open for writing");
  out << "P5\n" << w << ' ' << h << "\n255\n";
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) io_error(path, "write failed");
}

Raster read_png(const std::filesystem::path& path) {
  auto file = open_file(path, "rb");
  unsigned char sig[8];
  if (std::fread(sig, 1, 8, file.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0) io_error(path, "not a PNG file");

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_read_struct(&png, &info, nullptr);
    io_error(path, "libpng initialisation failed");
  }
  std::vector<unsigned char> pixels;
  std::vector<png_bytep> rows;
  png_uint_32 w = 0, h = 0;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    io_error(path, "corrupt PNG data");
  }
  png_init_io(png, file.get());
  png_set_sig_bytes(png, 8);
  png_read_info(png, info);
  w = png_get_image_width(png, info);
  h = png_get_image_height(png, info);
  const int color = png_get_color_type(png, info);
  const int depth = png_get_bit_depth(png, info);
  if (w < 1 || h < 1 || w > (1u << 16) || h > (1u << 16)) {
    png_destroy_read_struct(&png, &info, nullptr);
    io_error(path, "unsupported PNG dimensions");
  }
  if (depth == 16) png_set_strip_16(png);
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (color & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
  if (color == PNG_COLOR_TYPE_RGB || color == PNG_COLOR_TYPE_RGB_ALPHA || color == PNG_COLOR_TYPE_PALETTE) {
    png_set_rgb_to_gray_fixed(png, 1, -1, -1);
  }
  png_read_update_info(png, info);
  const std::size_t stride = png_get_rowbytes(png, info);
  pixels.resize(stride * h);
  rows.resize(h);
  for (png_uint_32 y = 0; y < h; ++y) rows[y] = pixels.data() + y * stride;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  Raster r(static_cast<int>(w), static_cast<int>(h), 1);
  for (png_uint_32 y = 0; y < h; ++y)
    for (png_uint_32 x = 0; x < w; ++x) r.at(static_cast<int>(x), static_cast<int>(y)) = pixels[y * stride + x];
  return r;
}

void write_png(const std::filesystem::path& path, int w, int h, int channels, const std::vector<unsigned char>& bytes) {
  auto file = open_file(path, "wb");
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, &info);
    io_error(path, "libpng initialisation failed");
  }
  std::vector<png_bytep> rows(static_cast<std::size_t>(h));
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    io_error(path, "PNG encoding failed");
  }
  png_init_io(png, file.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(w), static_cast<png_uint_32>(h), 8,
               channels == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  const std::size_t stride = static_cast<std::size_t>(w) * static_cast<std::size_t>(channels);
  for (int y = 0; y < h; ++y) rows[static_cast<std::size_t>(y)] = const_cast<png_bytep>(bytes.data() + static_cast<std::size_t>(y) * stride);
  png_write_info(png, info);
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

}  // namespace

Raster read_gray(const std::filesystem::path& path) {
  const std::string ext = lower_ext(path);
  if (ext == ".pgm") return read_pgm(path);
  if (ext == ".png") return read_png(path);
  io_error(path, "unsupported image extension (expected .pgm or .png)");
}

BinaryMask threshold(const Raster& gray, float level) {
  BinaryMask mask(gray.width, gray.height);
  for (int y = 0; y < gray.height; ++y)
    for (int x = 0; x < gray.width; ++x) mask.set(x, y, gray.at(x, y, 0) >= level);
  return mask;
}

BinaryMask read_mask(const std::filesystem::path& path) { return threshold(read_gray(path)); }

void write_gray(const std::filesystem::path& path, const Raster& image) {
  const std::string ext = lower_ext(path);
  const auto bytes = to_bytes(image);
  if (ext == ".pgm") return write_pgm(path, image.width, image.height, bytes);
  if (ext == ".png") return write_png(path, image.width, image.height, 1, bytes);
  io_error(path, "unsupported image extension (expected .pgm or .png)");
}

void write_mask(const std::filesystem::path& path, const BinaryMask& mask) {
  Raster r(mask.width(), mask.height(), 1);
  for (std::size_t i = 0; i < mask.size(); ++i) r.data[i] = mask.data()[i] ? 255.0f : 0.0f;
  write_gray(path, r);
}

void write_rgb_png(const std::filesystem::path& path, int width, int height, const std::vector<std::uint8_t>& rgb) {
  if (rgb.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * 3) {
    throw Error(ErrorKind::kInvalidInput, "rgb buffer size mismatch");
  }
  write_png(path, width, height, 3, rgb);
}

}  // namespace textkernel::io
