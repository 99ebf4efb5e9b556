// Copyright (c) 2026 the igstqa authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "igstqa/error.hpp"

namespace igstqa {

/// Boundary extension used by every filtering step. Symmetric (mirror) is the
/// production mode; periodic exists so shift-covariance properties can be
/// tested exactly.
enum class Boundary { symmetric, periodic };

/// Folds an arbitrary index into [0, n) by half-sample mirroring
/// (... 2 1 0 | 0 1 2 ... n-1 | n-1 n-2 ...).
inline int mirror_index(int i, int n) {
  const int period = 2 * n;
  int m = i % period;
  if (m < 0) m += period;
  return m < n ? m : period - 1 - m;
}

inline int periodic_index(int i, int n) {
  int m = i % n;
  if (m < 0) m += n;
  return m;
}

inline int extend_index(int i, int n, Boundary boundary) {
  return boundary == Boundary::symmetric ? mirror_index(i, n)
                                         : periodic_index(i, n);
}

/// Real-valued single-channel image, row-major, nominal intensity range [0,1].
/// Carries both the spatial image and its gradient magnitude through the
/// pipeline.
struct GrayImage {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  GrayImage() = default;
  GrayImage(int rows_, int cols_, double fill = 0.0)
      : rows(rows_), cols(cols_),
        data(static_cast<std::size_t>(rows_) * static_cast<std::size_t>(cols_),
             fill) {}

  double& at(int r, int c) {
    return data[static_cast<std::size_t>(r) * cols + c];
  }
  double at(int r, int c) const {
    return data[static_cast<std::size_t>(r) * cols + c];
  }
  std::size_t size() const { return data.size(); }

  bool same_shape(const GrayImage& other) const {
    return rows == other.rows && cols == other.cols;
  }
};

/// Interleaved 8-bit RGB image as delivered by the file loaders.
struct RgbImage8 {
  int rows = 0;
  int cols = 0;
  std::vector<std::uint8_t> data;  // r,g,b per pixel

  RgbImage8() = default;
  RgbImage8(int rows_, int cols_)
      : rows(rows_), cols(cols_),
        data(static_cast<std::size_t>(rows_) * static_cast<std::size_t>(cols_) * 3) {}
};

/// BT.601 luma, normalized to [0,1].
inline GrayImage to_grayscale(const RgbImage8& rgb) {
  if (rgb.rows <= 0 || rgb.cols <= 0 || rgb.data.empty())
    throw InputError("empty input");
  GrayImage out(rgb.rows, rgb.cols);
  const std::size_t n = out.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double y = (0.299 * rgb.data[3 * i] + 0.587 * rgb.data[3 * i + 1] +
                      0.114 * rgb.data[3 * i + 2]) /
                     255.0;
    out.data[i] = y < 0.0 ? 0.0 : (y > 1.0 ? 1.0 : y);
  }
  return out;
}

/// Root-mean-square magnitude of the two 3x3 Sobel responses:
/// sqrt((Gx^2 + Gy^2) / 2). Kernels are normalized by 1/8 so responses stay
/// in intensity units.
inline GrayImage gradient_magnitude(const GrayImage& img,
                                    Boundary boundary = Boundary::symmetric) {
  if (img.rows < 3 || img.cols < 3)
    throw InputError("image too small for gradient kernel");
  GrayImage out(img.rows, img.cols);
  for (int r = 0; r < img.rows; ++r) {
    const int rm = extend_index(r - 1, img.rows, boundary);
    const int rp = extend_index(r + 1, img.rows, boundary);
    for (int c = 0; c < img.cols; ++c) {
      const int cm = extend_index(c - 1, img.cols, boundary);
      const int cp = extend_index(c + 1, img.cols, boundary);
      const double gx = ((img.at(rm, cp) - img.at(rm, cm)) +
                         2.0 * (img.at(r, cp) - img.at(r, cm)) +
                         (img.at(rp, cp) - img.at(rp, cm))) /
                        8.0;
      const double gy = ((img.at(rp, cm) - img.at(rm, cm)) +
                         2.0 * (img.at(rp, c) - img.at(rm, c)) +
                         (img.at(rp, cp) - img.at(rm, cp))) /
                        8.0;
      out.at(r, c) = std::sqrt((gx * gx + gy * gy) / 2.0);
    }
  }
  return out;
}

/// Circular shift by (dr, dc); used by the shift-covariance property tests.
inline GrayImage circular_shift(const GrayImage& img, int dr, int dc) {
  GrayImage out(img.rows, img.cols);
  for (int r = 0; r < img.rows; ++r)
    for (int c = 0; c < img.cols; ++c)
      out.at(periodic_index(r + dr, img.rows), periodic_index(c + dc, img.cols)) =
          img.at(r, c);
  return out;
}

}  // namespace igstqa
