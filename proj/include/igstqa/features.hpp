// Copyright (c) 2026 the igstqa authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "igstqa/error.hpp"
#include "igstqa/exact_sum.hpp"
#include "igstqa/image.hpp"
#include "igstqa/uwt.hpp"

namespace igstqa {

/// Which image the features were extracted from: the spatial image itself or
/// its gradient magnitude.
enum class Domain { I, IGM };

enum class Orientation { H, V };

inline std::string to_string(Domain d) { return d == Domain::I ? "I" : "IGM"; }

inline Domain domain_from_string(const std::string& s) {
  if (s == "I") return Domain::I;
  if (s == "IGM") return Domain::IGM;
  throw InputError("unknown domain tag: " + s);
}

/// The six reduced-reference scalars of one subband: granularity g and
/// regularity r (in pixels) from the peak scan, plus standard deviation,
/// kurtosis (non-excess), skewness and mean log-energy entropy of the raw
/// coefficients.
struct SubbandFeatures {
  double g = 0.0;
  double r = 0.0;
  double sigma = 0.0;
  double kurt = 0.0;
  double skew = 0.0;
  double entropy = 0.0;

  friend bool operator==(const SubbandFeatures&, const SubbandFeatures&) = default;
};

///// Full feature set for one domain: one SubbandFeatures per (orientation,
/// scale), i.e. 2L entries / 12L scalars.
struct RRFeatureSet {
  Domain domain = Domain::I;
  int levels = 0;
  std::vector<SubbandFeatures> features;  // H scales 1..L, then V scales 1..L

  SubbandFeatures& at(Orientation o, int scale) {
    return features[index_of(o, scale)];
  }
  const SubbandFeatures& at(Orientation o, int scale) const {
    return features[index_of(o, scale)];
  }

  std::size_t index_of(Orientation o, int scale) const {
    return static_cast<std::size_t>(o == Orientation::H ? 0 : levels) +
           static_cast<std::size_t>(scale - 1);
  }

  friend bool operator==(const RRFeatureSet&, const RRFeatureSet&) = default;
};

/// Peak-to-peak distances along one line of coefficient magnitudes. A peak is
/// an interior sample strictly greater than both neighbors; a plateau of
/// equal values strictly above both plateau neighbors counts once, at its
/// leftmost index. Lines with fewer than two peaks yield no distances.
inline std::vector<int> detect_peak_distances(std::span<const double> line) {
  std::vector<int> distances;
  const std::size_t n = line.size();
  if (n < 3) return distances;
  int last_peak = -1;
  std::size_t i = 1;
  while (i + 1 < n) {
    if (line[i] > line[i - 1]) {
      std::size_t j = i;
      while (j + 1 < n && line[j + 1] == line[i]) ++j;
      if (j + 1 < n && line[i] > line[j + 1]) {
        if (last_peak >= 0) distances.push_back(static_cast<int>(i) - last_peak);
        last_peak = static_cast<int>(i);
      }
      i = j + 1;
    } else {
      ++i;
    }
  }
  return distances;
}

/// Granularity and regularity of one subband: mean and population standard
/// deviation of the peak distances pooled over every scanned line of the
/// coefficient magnitudes. Orientation H walks each row of |HH_j|,
/// orientation V each column of |VH_j|. Fewer than two peaks everywhere
/// yields (0, 0).
inline std::pair<double, double> granularity_regularity(const GrayImage& subband,
                                                        Orientation orientation) {
  std::vector<int> pooled;
  std::vector<double> line;
  if (orientation == Orientation::H) {
    line.resize(static_cast<std::size_t>(subband.cols));
    for (int r = 0; r < subband.rows; ++r) {
      for (int c = 0; c < subband.cols; ++c) line[c] = std::fabs(subband.at(r, c));
      const auto d = detect_peak_distances(line);
      pooled.insert(pooled.end(), d.begin(), d.end());
    }
  } else {
    line.resize(static_cast<std::size_t>(subband.rows));
    for (int c = 0; c < subband.cols; ++c) {
      for (int r = 0; r < subband.rows; ++r) line[r] = std::fabs(subband.at(r, c));
      const auto d = detect_peak_distances(line);
      pooled.insert(pooled.end(), d.begin(), d.end());
    }
  }
  if (pooled.empty()) return {0.0, 0.0};

  long long sum = 0;
  for (int d : pooled) sum += d;
  const double mean = static_cast<double>(sum) / static_cast<double>(pooled.size());
  double sq = 0.0;
  for (int d : pooled) {
    const double dev = static_cast<double>(d) - mean;
    sq += dev * dev;
  }
  const double stddev = std::sqrt(sq / static_cast<double>(pooled.size()));
  return {mean, stddev};
}

struct SubbandStats {
  double sigma = 0.0;
  double kurt = 0.0;
  double skew = 0.0;
  double entropy = 0.0;
};

/// Population moments and mean log-energy entropy of raw (signed)
/// coefficients. Kurtosis is non-excess (Gaussian -> 3). Entropy uses the
/// convention log(0) := 0 and is divided by the coefficient count so it is
/// independent of image size. Near-zero spread degenerates to
/// (0, 0, 0, entropy).
inline SubbandStats subband_statistics(std::span<const double> coeffs) {
  const std::size_t n = coeffs.size();
  if (n < 2) throw InputError("degenerate subband");

  ExactSum sum;
  ExactSum energy;
  for (double c : coeffs) {
    sum.add(c);
    const double c2 = c * c;
    energy.add(c2 > 0.0 ? std::log(c2) : 0.0);
  }
  const double count = static_cast<double>(n);
  const double mean = sum.value() / count;
  const double entropy = energy.value() / count;

  ExactSum m2s, m3s, m4s;
  for (double c : coeffs) {
    const double d = c - mean;
    const double d2 = d * d;
    m2s.add(d2);
    m3s.add(d2 * d);
    m4s.add(d2 * d2);
  }
  const double m2 = m2s.value() / count;
  const double sigma = std::sqrt(m2);
  if (sigma < 1e-12) return {0.0, 0.0, 0.0, entropy};

  SubbandStats out;
  out.sigma = sigma;
  out.skew = (m3s.value() / count) / (sigma * sigma * sigma);
  out.kurt = (m4s.value() / count) / (m2 * m2);
  out.entropy = entropy;
  return out;
}

/// Extracts the reduced-reference feature sets for the requested domains:
/// decompose to `levels` scales and, per scale, take granularity/regularity
/// of |HH_j| (H scan) and |VH_j| (V scan) plus the statistics of each
/// subband's raw coefficients.
inline std::vector<RRFeatureSet> extract_rr_features(
    const GrayImage& img, int levels, std::span<const Domain> domains,
    Boundary boundary = Boundary::symmetric) {
  if (img.rows < 8 || img.cols < 8)
    throw InputError("image too small for feature extraction");
  if (domains.empty()) throw InputError("no feature domains requested");

  std::vector<RRFeatureSet> sets;
  sets.reserve(domains.size());
  for (Domain domain : domains) {
    const GrayImage& source =
        domain == Domain::I ? img : gradient_magnitude(img, boundary);
    const WaveletPyramid pyr = decompose(source, levels, boundary);

    RRFeatureSet set;
    set.domain = domain;
    set.levels = levels;
    set.features.resize(static_cast<std::size_t>(2 * levels));
    for (int j = 1; j <= levels; ++j) {
      const GrayImage& hh = pyr.hh[j - 1];
      const GrayImage& vh = pyr.vh[j - 1];

      SubbandFeatures& fh = set.at(Orientation::H, j);
      const auto [gh, rh] = granularity_regularity(hh, Orientation::H);
      const SubbandStats sh = subband_statistics(hh.data);
      fh = {gh, rh, sh.sigma, sh.kurt, sh.skew, sh.entropy};

      SubbandFeatures& fv = set.at(Orientation::V, j);
      const auto [gv, rv] = granularity_regularity(vh, Orientation::V);
      const SubbandStats sv = subband_statistics(vh.data);
      fv = {gv, rv, sv.sigma, sv.kurt, sv.skew, sv.entropy};
    }
    sets.push_back(std::move(set));
  }
  return sets;
}

}  // namespace igstqa
