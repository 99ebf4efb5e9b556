// Copyright (c) 2026 the igstqa authors
// SPDX-License-Identifier: Apache-2.0
//
// Deterministic texture generators for tests: seeded smoothed noise,
// sinusoidal gratings, checkerboards. All samples lie in [0,1].

#pragma once

#include <unistd.h>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "igstqa/image.hpp"
#include "igstqa/rng.hpp"

namespace igstqa::test {

inline GrayImage noise_texture(int rows, int cols, std::uint64_t seed,
                               int smooth_passes = 1) {
  SplitMix64 rng(seed);
  GrayImage img(rows, cols);
  for (double& v : img.data) v = rng.next_unit();
  // Cheap separable 3-tap smoothing adds the spatial correlation real
  // textures have; periodic wrap keeps the statistics translation-friendly.
  for (int pass = 0; pass < smooth_passes; ++pass) {
    GrayImage tmp(rows, cols);
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c)
        tmp.at(r, c) = (img.at(r, periodic_index(c - 1, cols)) + img.at(r, c) +
                        img.at(r, periodic_index(c + 1, cols))) /
                       3.0;
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c)
        img.at(r, c) = (tmp.at(periodic_index(r - 1, rows), c) + tmp.at(r, c) +
                        tmp.at(periodic_index(r + 1, rows), c)) /
                       3.0;
  }
  return img;
}

/// Intensity varies along columns (a vertical-bar grating); constant down
/// each column when period_r == 0, and modulated by rows otherwise.
inline GrayImage sinusoid_texture(int rows, int cols, double period_c,
                                  double period_r = 0.0, double phase = 0.7) {
  GrayImage img(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      double v = std::sin(2.0 * M_PI * c / period_c + phase);
      if (period_r > 0.0) v *= std::sin(2.0 * M_PI * r / period_r + phase);
      img.at(r, c) = 0.5 + 0.45 * v;
    }
  return img;
}

inline GrayImage checkerboard_texture(int rows, int cols, int cell) {
  GrayImage img(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c)
      img.at(r, c) = ((r / cell + c / cell) % 2 == 0) ? 0.2 : 0.8;
  return img;
}

/// The standard test corpus: 21 textures spanning 32x32 to 256x256.
inline std::vector<GrayImage> corpus() {
  std::vector<GrayImage> out;
  const int noise_sizes[] = {32, 48, 64, 96, 128, 192, 256};
  std::uint64_t seed = 1;
  for (int s : noise_sizes) out.push_back(noise_texture(s, s, seed++));

  out.push_back(sinusoid_texture(64, 64, 6.0));
  out.push_back(sinusoid_texture(64, 64, 8.0));
  out.push_back(sinusoid_texture(64, 64, 12.0));
  out.push_back(sinusoid_texture(96, 96, 16.0, 8.0));
  out.push_back(sinusoid_texture(96, 96, 24.0, 12.0));
  out.push_back(sinusoid_texture(128, 128, 12.0, 12.0));
  out.push_back(sinusoid_texture(256, 256, 10.0));

  // Cells below ~5 px are erased outright by sigma >= 2 blur, which
  // saturates severity chains instead of ordering them; keep the finest
  // boards coarse enough that every blur level leaves structure behind.
  out.push_back(checkerboard_texture(32, 32, 8));
  out.push_back(checkerboard_texture(48, 48, 6));
  out.push_back(checkerboard_texture(64, 64, 10));
  out.push_back(checkerboard_texture(96, 96, 5));
  out.push_back(checkerboard_texture(128, 128, 8));
  out.push_back(checkerboard_texture(192, 192, 6));
  out.push_back(checkerboard_texture(256, 256, 16));
  return out;
}

/// Unique scratch directory, removed on destruction.
struct TempDir {
  std::filesystem::path path;

  TempDir() {
    const auto base = std::filesystem::temp_directory_path();
    for (std::uint64_t i = 0;; ++i) {
      auto candidate = base / ("igstqa_test_" + std::to_string(::getpid()) + "_" +
                               std::to_string(i));
      std::error_code ec;
      if (std::filesystem::create_directory(candidate, ec)) {
        path = candidate;
        return;
      }
    }
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace igstqa::test
