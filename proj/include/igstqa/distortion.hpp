// Copyright (c) 2026 the igstqa authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "igstqa/error.hpp"
#include "igstqa/image.hpp"
#include "igstqa/rng.hpp"

namespace igstqa {

/// Separable Gaussian smoothing, kernel radius ceil(3*sigma), taps normalized
/// to sum 1, symmetric boundaries. sigma 0 is a bitwise identity. Sigma is
/// capped at min(rows, cols)/4 so the kernel cannot swamp the image.
inline GrayImage gaussian_blur(const GrayImage& img, double sigma) {
  if (!(sigma >= 0.0) || sigma > std::min(img.rows, img.cols) / 4.0)
    throw InputError("blur too large");
  if (sigma == 0.0) return img;

  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> kernel(static_cast<std::size_t>(2 * radius + 1));
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    const double w = std::exp(-(static_cast<double>(i) * i) / (2.0 * sigma * sigma));
    kernel[static_cast<std::size_t>(i + radius)] = w;
    sum += w;
  }
  for (double& w : kernel) w /= sum;

  GrayImage tmp(img.rows, img.cols);
  for (int r = 0; r < img.rows; ++r)
    for (int c = 0; c < img.cols; ++c) {
      double acc = 0.0;
      for (int i = -radius; i <= radius; ++i)
        acc += kernel[static_cast<std::size_t>(i + radius)] *
               img.at(r, mirror_index(c + i, img.cols));
      tmp.at(r, c) = acc;
    }
  GrayImage out(img.rows, img.cols);
  for (int r = 0; r < img.rows; ++r)
    for (int c = 0; c < img.cols; ++c) {
      double acc = 0.0;
      for (int i = -radius; i <= radius; ++i)
        acc += kernel[static_cast<std::size_t>(i + radius)] *
               tmp.at(mirror_index(r + i, img.rows), c);
      out.at(r, c) = acc;
    }
  return out;
}

/// Permutes the full block x block tiles by a seeded uniform permutation.
/// Partial blocks along the right/bottom edges stay in place, so the pixel
/// multiset of the full-block region is preserved exactly.
inline GrayImage tile_shuffle(const GrayImage& img, int block, std::uint64_t seed) {
  if (block < 1) throw InputError("block too small");
  if (block > std::min(img.rows, img.cols)) throw InputError("block too large");

  const int nbr = img.rows / block;
  const int nbc = img.cols / block;
  const std::size_t n = static_cast<std::size_t>(nbr) * static_cast<std::size_t>(nbc);

  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  SplitMix64 rng(seed);
  for (std::size_t i = n - 1; i > 0; --i)
    std::swap(perm[i], perm[rng.next_below(i + 1)]);

  GrayImage out = img;  // partial edge blocks keep their input content
  for (std::size_t i = 0; i < n; ++i) {
    const int dst_r = static_cast<int>(i) / nbc * block;
    const int dst_c = static_cast<int>(i) % nbc * block;
    const int src_r = static_cast<int>(perm[i]) / nbc * block;
    const int src_c = static_cast<int>(perm[i]) % nbc * block;
    for (int r = 0; r < block; ++r)
      for (int c = 0; c < block; ++c)
        out.at(dst_r + r, dst_c + c) = img.at(src_r + r, src_c + c);
  }
  return out;
}

/// Circularly shifts each row by an independent seeded uniform draw from
/// [-max_shift, max_shift]. Row pixel multisets are preserved.
inline GrayImage misalign(const GrayImage& img, int max_shift, std::uint64_t seed) {
  if (max_shift < 0 || max_shift >= img.cols) throw InputError("shift too large");
  if (max_shift == 0) return img;

  SplitMix64 rng(seed);
  GrayImage out(img.rows, img.cols);
  for (int r = 0; r < img.rows; ++r) {
    const int shift =
        static_cast<int>(rng.next_below(2 * static_cast<std::uint64_t>(max_shift) + 1)) -
        max_shift;
    for (int c = 0; c < img.cols; ++c)
      out.at(r, c) = img.at(r, periodic_index(c - shift, img.cols));
  }
  return out;
}

enum class DistortionKind { blur, tile_shuffle, misalign };

///// One degradation step: `kind:magnitude[:seed]`. Magnitude is Gaussian sigma
/// for blur, block size for tile_shuffle, max row shift for misalign.
struct DistortionSpec {
  DistortionKind kind = DistortionKind::blur;
  double magnitude = 0.0;
  std::uint64_t seed = 0;
};

inline DistortionSpec parse_distortion_spec(std::string_view text) {
  const auto split = [](std::string_view s) {
    std::vector<std::string_view> parts;
    while (true) {
      const auto pos = s.find(':');
      if (pos == std::string_view::npos) {
        parts.push_back(s);
        return parts;
      }
      parts.push_back(s.substr(0, pos));
      s = s.substr(pos + 1);
    }
  };
  const auto parts = split(text);
  if (parts.size() < 2 || parts.size() > 3)
    throw InputError("invalid distortion spec: " + std::string(text));

  DistortionSpec spec;
  if (parts[0] == "blur")
    spec.kind = DistortionKind::blur;
  else if (parts[0] == "tile_shuffle")
    spec.kind = DistortionKind::tile_shuffle;
  else if (parts[0] == "misalign")
    spec.kind = DistortionKind::misalign;
  else
    throw InputError("unknown distortion kind: " + std::string(parts[0]));

  const auto magnitude = parts[1];
  auto res = std::from_chars(magnitude.data(), magnitude.data() + magnitude.size(),
                             spec.magnitude);
  if (res.ec != std::errc() || res.ptr != magnitude.data() + magnitude.size() ||
      !(spec.magnitude >= 0.0))
    throw InputError("invalid distortion spec: " + std::string(text));

  if (parts.size() == 3) {
    const auto seed = parts[2];
    res = std::from_chars(seed.data(), seed.data() + seed.size(), spec.seed);
    if (res.ec != std::errc() || res.ptr != seed.data() + seed.size())
      throw InputError("invalid distortion spec: " + std::string(text));
  }
  return spec;
}

inline GrayImage apply_distortion(const GrayImage& img, const DistortionSpec& spec) {
  switch (spec.kind) {
    case DistortionKind::blur:
      return gaussian_blur(img, spec.magnitude);
    case DistortionKind::tile_shuffle: {
      const int block = static_cast<int>(spec.magnitude);
      if (static_cast<double>(block) != spec.magnitude)
        throw InputError("block size must be an integer");
      return tile_shuffle(img, block, spec.seed);
    }
    default: {
      const int shift = static_cast<int>(spec.magnitude);
      if (static_cast<double>(shift) != spec.magnitude)
        throw InputError("shift must be an integer");
      return misalign(img, shift, spec.seed);
    }
  }
}

}  // namespace igstqa
