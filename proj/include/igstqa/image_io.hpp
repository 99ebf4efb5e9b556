// Copyright (c) 2026 the igstqa authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <csetjmp>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include <png.h>

#include "igstqa/error.hpp"
#include "igstqa/image.hpp"

namespace igstqa {
namespace detail {

struct FileHandle {
  FILE* fp = nullptr;
  explicit FileHandle(const std::string& path, const char* mode)
      : fp(std::fopen(path.c_str(), mode)) {}
  ~FileHandle() {
    if (fp) std::fclose(fp);
  }
  FileHandle(const FileHandle&) = delete;
  FileHandle& operator=(const FileHandle&) = delete;
};

inline GrayImage load_png(const std::string& path) {
  FileHandle file(path, "rb");
  if (!file.fp) throw InputError("cannot read image: " + path);

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  std::vector<unsigned char> pixels;
  std::vector<png_bytep> row_ptrs;
  // longjmp lands back here on any decode error; our frame stays live, so
  // the vectors are released by the throw below.
  if (!png || !info || setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(png ? &png : nullptr, info ? &info : nullptr, nullptr);
    throw InputError("cannot read image: " + path);
  }

  png_init_io(png, file.fp);
  png_read_info(png, info);

  const png_byte color_type = png_get_color_type(png, info);
  png_byte bit_depth = png_get_bit_depth(png, info);
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8)
    png_set_expand_gray_1_2_4_to_8(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  if (color_type & PNG_COLOR_MASK_ALPHA || png_get_valid(png, info, PNG_INFO_tRNS))
    png_set_strip_alpha(png);
  png_set_interlace_handling(png);
  png_read_update_info(png, info);

  const int rows = static_cast<int>(png_get_image_height(png, info));
  const int cols = static_cast<int>(png_get_image_width(png, info));
  const int channels = png_get_channels(png, info);
  bit_depth = png_get_bit_depth(png, info);
  const std::size_t rowbytes = png_get_rowbytes(png, info);
  if (rows <= 0 || cols <= 0 || (channels != 1 && channels != 3) ||
      (bit_depth != 8 && bit_depth != 16))
    longjmp(png_jmpbuf(png), 1);

  pixels.resize(rowbytes * static_cast<std::size_t>(rows));
  row_ptrs.resize(static_cast<std::size_t>(rows));
  for (int r = 0; r < rows; ++r)
    row_ptrs[static_cast<std::size_t>(r)] = pixels.data() + rowbytes * static_cast<std::size_t>(r);
  png_read_image(png, row_ptrs.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  // 16-bit PNG samples are big-endian.
  const auto sample = [&](int r, int c, int ch) -> double {
    const unsigned char* p = pixels.data() + rowbytes * static_cast<std::size_t>(r) +
                             static_cast<std::size_t>((c * channels + ch)) *
                                 (bit_depth == 16 ? 2 : 1);
    if (bit_depth == 16)
      return static_cast<double>((p[0] << 8) | p[1]) / 65535.0;
    return static_cast<double>(*p) / 255.0;
  };

  if (channels == 1) {
    GrayImage img(rows, cols);
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c) img.at(r, c) = sample(r, c, 0);
    return img;
  }
  if (bit_depth == 8) {
    RgbImage8 rgb(rows, cols);
    std::size_t i = 0;
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c)
        for (int ch = 0; ch < 3; ++ch)
          rgb.data[i++] = pixels[rowbytes * static_cast<std::size_t>(r) +
                                 static_cast<std::size_t>(c * 3 + ch)];
    return to_grayscale(rgb);
  }
  GrayImage img(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      const double y = 0.299 * sample(r, c, 0) + 0.587 * sample(r, c, 1) +
                       0.114 * sample(r, c, 2);
      img.at(r, c) = std::min(1.0, std::max(0.0, y));
    }
  return img;
}

inline void save_png(const std::string& path, const GrayImage& img) {
  FileHandle file(path, "wb");
  if (!file.fp) throw InputError("cannot write image: " + path);

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  std::vector<unsigned char> row;
  if (!png || !info || setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(png ? &png : nullptr, info ? &info : nullptr);
    throw InputError("cannot write image: " + path);
  }

  png_init_io(png, file.fp);
  png_set_IHDR(png, info, static_cast<png_uint_32>(img.cols),
               static_cast<png_uint_32>(img.rows), 16, PNG_COLOR_TYPE_GRAY,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);

  row.resize(static_cast<std::size_t>(img.cols) * 2);
  for (int r = 0; r < img.rows; ++r) {
    for (int c = 0; c < img.cols; ++c) {
      const double v = std::min(1.0, std::max(0.0, img.at(r, c)));
      const auto q = static_cast<std::uint16_t>(std::lround(v * 65535.0));
      row[static_cast<std::size_t>(c) * 2] = static_cast<unsigned char>(q >> 8);
      row[static_cast<std::size_t>(c) * 2 + 1] = static_cast<unsigned char>(q & 0xff);
    }
    png_write_row(png, row.data());
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

inline GrayImage load_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read image: " + path);

  const auto next_token = [&in]() -> std::string {
    std::string tok;
    char ch;
    while (in.get(ch)) {
      if (ch == '#') {
        while (in.get(ch) && ch != '\n') {
        }
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(ch))) {
        if (!tok.empty()) return tok;
        continue;
      }
      tok += ch;
    }
    return tok;
  };

  if (next_token() != "P5") throw InputError("cannot read image: " + path);
  int cols = 0, rows = 0, maxval = 0;
  try {
    cols = std::stoi(next_token());
    rows = std::stoi(next_token());
    maxval = std::stoi(next_token());
  } catch (const std::exception&) {
    throw InputError("cannot read image: " + path);
  }
  if (cols < 1 || rows < 1 || maxval < 1 || maxval > 65535)
    throw InputError("cannot read image: " + path);

  const bool wide = maxval > 255;
  const std::size_t count = static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
  std::vector<unsigned char> raw(count * (wide ? 2 : 1));
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (static_cast<std::size_t>(in.gcount()) != raw.size())
    throw InputError("cannot read image: " + path);

  GrayImage img(rows, cols);
  for (std::size_t i = 0; i < count; ++i) {
    const unsigned v = wide ? static_cast<unsigned>(raw[i * 2]) << 8 | raw[i * 2 + 1]
                            : raw[i];
    img.data[i] = static_cast<double>(v) / maxval;
  }
  return img;
}

inline void save_pgm(const std::string& path, const GrayImage& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write image: " + path);
  out << "P5\n" << img.cols << ' ' << img.rows << "\n65535\n";
  std::vector<unsigned char> raw(img.data.size() * 2);
  for (std::size_t i = 0; i < img.data.size(); ++i) {
    const double v = std::min(1.0, std::max(0.0, img.data[i]));
    const auto q = static_cast<std::uint16_t>(std::lround(v * 65535.0));
    raw[i * 2] = static_cast<unsigned char>(q >> 8);
    raw[i * 2 + 1] = static_cast<unsigned char>(q & 0xff);
  }
  out.write(reinterpret_cast<const char*>(raw.data()),
            static_cast<std::streamsize>(raw.size()));
  if (!out) throw InputError("cannot write image: " + path);
}

inline bool ends_with_nocase(const std::string& s, const std::string& suffix) {
  if (s.size() < suffix.size()) return false;
  for (std::size_t i = 0; i < suffix.size(); ++i)
    if (std::tolower(static_cast<unsigned char>(s[s.size() - suffix.size() + i])) !=
        suffix[i])
      return false;
  return true;
}

}  // namespace detail

/// Loads a PNG or binary PGM file as a grayscale image in [0,1], dispatching
/// on the file's magic bytes. Color inputs are reduced via BT.601 luma.
inline GrayImage load_gray_image(const std::string& path) {
  std::ifstream probe(path, std::ios::binary);
  if (!probe) throw InputError("cannot read image: " + path);
  unsigned char magic[2] = {0, 0};
  probe.read(reinterpret_cast<char*>(magic), 2);
  probe.close();
  if (magic[0] == 0x89 && magic[1] == 'P') return detail::load_png(path);
  if (magic[0] == 'P' && magic[1] == '5') return detail::load_pgm(path);
  throw InputError("cannot read image: " + path);
}

/// Writes a 16-bit grayscale image; the format comes from the extension
/// (.png or .pgm). Values are clipped to [0,1] and quantized by rounding.
inline void save_gray_image(const std::string& path, const GrayImage& img) {
  if (img.rows < 1 || img.cols < 1) throw InputError("empty image");
  if (detail::ends_with_nocase(path, ".png")) return detail::save_png(path, img);
  if (detail::ends_with_nocase(path, ".pgm")) return detail::save_pgm(path, img);
  throw InputError("unsupported image format: " + path);
}

}  // namespace igstqa
