// Copyright (c) 2026 the igstqa authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include "igstqa/error.hpp"
#include "igstqa/image.hpp"

namespace igstqa {

/// Undecimated (a trous) Haar analysis filters. Lowpass has unit DC gain,
/// highpass has unit Nyquist gain and zero mean, so coefficients stay in
/// intensity units at every level. At level j the two taps sit 2^(j-1)
/// samples apart; the gaps are the inserted a-trous zeros.
inline constexpr double kUwtLow0 = 0.5;
inline constexpr double kUwtLow1 = 0.5;
inline constexpr double kUwtHigh0 = 0.5;
inline constexpr double kUwtHigh1 = -0.5;

/// L levels of same-size subbands. hh[j-1] is high frequency along the
/// horizontal axis (responds to vertical edges), vh[j-1] along the vertical
/// axis; ll_final is the coarsest lowpass residual. No diagonal band is
/// computed.
struct WaveletPyramid {
  int levels = 0;
  std::vector<GrayImage> hh;
  std::vector<GrayImage> vh;
  GrayImage ll_final;
};

namespace detail {

/// Two-tap filtering along the horizontal axis: taps at columns c and c+step.
inline GrayImage filter_horizontal(const GrayImage& in, double t0, double t1,
                                   int step, Boundary boundary) {
  GrayImage out(in.rows, in.cols);
  for (int r = 0; r < in.rows; ++r)
    for (int c = 0; c < in.cols; ++c)
      out.at(r, c) =
          t0 * in.at(r, c) + t1 * in.at(r, extend_index(c + step, in.cols, boundary));
  return out;
}

/// Two-tap filtering along the vertical axis: taps at rows r and r+step.
inline GrayImage filter_vertical(const GrayImage& in, double t0, double t1,
                                 int step, Boundary boundary) {
  GrayImage out(in.rows, in.cols);
  for (int r = 0; r < in.rows; ++r) {
    const int rs = extend_index(r + step, in.rows, boundary);
    for (int c = 0; c < in.cols; ++c)
      out.at(r, c) = t0 * in.at(r, c) + t1 * in.at(rs, c);
  }
  return out;
}

}  // namespace detail

/// L-level undecimated wavelet decomposition. Level j filters LL_{j-1} with
/// the Haar pair dilated by step 2^(j-1); every subband keeps the input size.
inline WaveletPyramid decompose(const GrayImage& img, int levels,
                                Boundary boundary = Boundary::symmetric) {
  if (levels < 1) throw InputError("levels must be at least 1");
  if (levels > 30 || (1 << (levels - 1)) > std::min(img.rows, img.cols))
    throw InputError("too many decomposition levels for image size");

  WaveletPyramid pyr;
  pyr.levels = levels;
  pyr.hh.reserve(levels);
  pyr.vh.reserve(levels);

  GrayImage ll = img;
  for (int j = 1; j <= levels; ++j) {
    const int step = 1 << (j - 1);
    GrayImage smooth_v =
        detail::filter_vertical(ll, kUwtLow0, kUwtLow1, step, boundary);
    GrayImage smooth_h =
        detail::filter_horizontal(ll, kUwtLow0, kUwtLow1, step, boundary);
    pyr.hh.push_back(detail::filter_horizontal(smooth_v, kUwtHigh0, kUwtHigh1,
                                               step, boundary));
    pyr.vh.push_back(
        detail::filter_vertical(smooth_h, kUwtHigh0, kUwtHigh1, step, boundary));
    ll = detail::filter_horizontal(smooth_v, kUwtLow0, kUwtLow1, step, boundary);
  }
  pyr.ll_final = std::move(ll);
  return pyr;
}

}  // namespace igstqa
