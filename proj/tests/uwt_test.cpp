// Copyright (c) 2026 the igstqa authors
// SPDX-License-Identifier: Apache-2.0

#include "igstqa/uwt.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "support/oracles.hpp"
#include "support/textures.hpp"

namespace igstqa {
namespace {

double max_abs_diff(const GrayImage& a, const GrayImage& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i)
    m = std::max(m, std::fabs(a.data[i] - b.data[i]));
  return m;
}

double energy(const GrayImage& img) {
  double e = 0.0;
  for (double v : img.data) e += v * v;
  return e;
}

TEST(Decompose, ConstantImageAnnihilatesDetails) {
  const GrayImage img(16, 16, 0.7);
  const WaveletPyramid p = decompose(img, 4);
  ASSERT_EQ(p.levels, 4);
  ASSERT_EQ(p.hh.size(), 4u);
  ASSERT_EQ(p.vh.size(), 4u);
  for (int j = 0; j < 4; ++j) {
    ASSERT_TRUE(p.hh[static_cast<std::size_t>(j)].same_shape(img));
    for (double v : p.hh[static_cast<std::size_t>(j)].data) EXPECT_EQ(v, 0.0);
    for (double v : p.vh[static_cast<std::size_t>(j)].data) EXPECT_EQ(v, 0.0);
  }
  // Unit-DC-gain lowpass keeps the constant exactly.
  for (double v : p.ll_final.data) EXPECT_EQ(v, 0.7);
}

TEST(Decompose, ImpulseLevelOneKernels) {
  GrayImage img(9, 9, 0.0);
  img.at(4, 4) = 1.0;
  const WaveletPyramid p = decompose(img, 1);
  // HH_1: row-axis highpass of the column-axis lowpass. With taps at
  // forward offsets {0, 1}, the response lands on offsets {-1, 0} around
  // the impulse in each axis.
  EXPECT_EQ(p.hh[0].at(4, 4), 0.25);
  EXPECT_EQ(p.hh[0].at(3, 4), 0.25);
  EXPECT_EQ(p.hh[0].at(4, 3), -0.25);
  EXPECT_EQ(p.hh[0].at(3, 3), -0.25);
  EXPECT_EQ(p.vh[0].at(4, 4), 0.25);
  EXPECT_EQ(p.vh[0].at(4, 3), 0.25);
  EXPECT_EQ(p.vh[0].at(3, 4), -0.25);
  EXPECT_EQ(p.vh[0].at(3, 3), -0.25);
  double sum_hh = 0.0;
  for (double v : p.hh[0].data) sum_hh += std::fabs(v);
  EXPECT_EQ(sum_hh, 1.0);
}

TEST(Decompose, ColumnAlternationExcitesHH) {
  // img(r,c) = 1 if c even: variation runs along the row direction, which
  // the HH (row-axis highpass) subband carries; VH sees constant columns.
  GrayImage img(16, 16);
  for (int r = 0; r < 16; ++r)
    for (int c = 0; c < 16; ++c) img.at(r, c) = (c % 2 == 0) ? 1.0 : 0.0;
  const WaveletPyramid p = decompose(img, 1);
  EXPECT_GT(energy(p.hh[0]), energy(p.vh[0]));
  for (double v : p.vh[0].data) EXPECT_EQ(v, 0.0);
  double max_hh = 0.0;
  for (double v : p.hh[0].data) max_hh = std::max(max_hh, std::fabs(v));
  EXPECT_EQ(max_hh, 0.5);
}

TEST(Decompose, MatchesStagewiseOracleSymmetric) {
  for (std::uint64_t seed = 11; seed < 16; ++seed) {
    const GrayImage img = test::noise_texture(32, 32, seed, 0);
    const WaveletPyramid p = decompose(img, 4, Boundary::symmetric);
    const auto expected =
        test::oracle::decompose_stagewise(img, 4, Boundary::symmetric);
    for (int j = 0; j < 4; ++j) {
      EXPECT_LE(max_abs_diff(p.hh[static_cast<std::size_t>(j)],
                             expected.hh[static_cast<std::size_t>(j)]),
                1e-10);
      EXPECT_LE(max_abs_diff(p.vh[static_cast<std::size_t>(j)],
                             expected.vh[static_cast<std::size_t>(j)]),
                1e-10);
    }
    EXPECT_LE(max_abs_diff(p.ll_final, expected.ll), 1e-10);
  }
}

TEST(Decompose, MatchesComposedKernelOraclePeriodic) {
  for (std::uint64_t seed = 21; seed < 24; ++seed) {
    const GrayImage img = test::noise_texture(32, 32, seed, 0);
    const WaveletPyramid p = decompose(img, 4, Boundary::periodic);
    const auto expected = test::oracle::decompose_composed(img, 4);
    for (int j = 0; j < 4; ++j) {
      EXPECT_LE(max_abs_diff(p.hh[static_cast<std::size_t>(j)],
                             expected.hh[static_cast<std::size_t>(j)]),
                1e-10);
      EXPECT_LE(max_abs_diff(p.vh[static_cast<std::size_t>(j)],
                             expected.vh[static_cast<std::size_t>(j)]),
                1e-10);
    }
    EXPECT_LE(max_abs_diff(p.ll_final, expected.ll), 1e-10);
  }
}

TEST(Decompose, Linearity) {
  const GrayImage x = test::noise_texture(24, 24, 31, 0);
  const GrayImage y = test::noise_texture(24, 24, 32, 0);
  const double a = 1.375, b = -0.625;
  GrayImage mix(24, 24);
  for (std::size_t i = 0; i < mix.data.size(); ++i)
    mix.data[i] = a * x.data[i] + b * y.data[i];
  const WaveletPyramid pm = decompose(mix, 3);
  const WaveletPyramid px = decompose(x, 3);
  const WaveletPyramid py = decompose(y, 3);
  for (int j = 0; j < 3; ++j)
    for (std::size_t i = 0; i < pm.hh[static_cast<std::size_t>(j)].data.size(); ++i) {
      EXPECT_NEAR(pm.hh[static_cast<std::size_t>(j)].data[i],
                  a * px.hh[static_cast<std::size_t>(j)].data[i] +
                      b * py.hh[static_cast<std::size_t>(j)].data[i],
                  1e-10);
      EXPECT_NEAR(pm.vh[static_cast<std::size_t>(j)].data[i],
                  a * px.vh[static_cast<std::size_t>(j)].data[i] +
                      b * py.vh[static_cast<std::size_t>(j)].data[i],
                  1e-10);
    }
}

TEST(Decompose, ShiftCovarianceExactUnderPeriodic) {
  const GrayImage img = test::noise_texture(20, 28, 77, 0);
  const int dr = 7, dc = -9;
  const WaveletPyramid base = decompose(img, 3, Boundary::periodic);
  const WaveletPyramid shifted =
      decompose(circular_shift(img, dr, dc), 3, Boundary::periodic);
  for (int j = 0; j < 3; ++j) {
    const GrayImage expect_hh =
        circular_shift(base.hh[static_cast<std::size_t>(j)], dr, dc);
    const GrayImage expect_vh =
        circular_shift(base.vh[static_cast<std::size_t>(j)], dr, dc);
    EXPECT_EQ(shifted.hh[static_cast<std::size_t>(j)].data, expect_hh.data);
    EXPECT_EQ(shifted.vh[static_cast<std::size_t>(j)].data, expect_vh.data);
  }
  EXPECT_EQ(shifted.ll_final.data, circular_shift(base.ll_final, dr, dc).data);
}

TEST(Decompose, SizeAndLevelValidation) {
  const GrayImage img(8, 8, 0.1);
  EXPECT_NO_THROW(decompose(img, 4));  // support 2^(L-1) == min dimension
  EXPECT_THROW(decompose(img, 5), InputError);
  EXPECT_THROW(decompose(img, 0), InputError);
  const GrayImage wide(8, 64, 0.1);
  EXPECT_THROW(decompose(wide, 5), InputError);  // limited by min(rows, cols)
  EXPECT_NO_THROW(decompose(GrayImage(64, 64, 0.1), 5));
}

TEST(Decompose, AllCoefficientsFinite) {
  const GrayImage img = test::noise_texture(33, 47, 99, 1);
  const WaveletPyramid p = decompose(img, 4);
  for (int j = 0; j < 4; ++j) {
    for (double v : p.hh[static_cast<std::size_t>(j)].data)
      ASSERT_TRUE(std::isfinite(v));
    for (double v : p.vh[static_cast<std::size_t>(j)].data)
      ASSERT_TRUE(std::isfinite(v));
  }
  for (double v : p.ll_final.data) ASSERT_TRUE(std::isfinite(v));
}

}  // namespace
}  // namespace igstqa
