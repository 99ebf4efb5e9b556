// Copyright (c) 2026 the igstqa authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "igstqa/error.hpp"
#include "igstqa/features.hpp"
#include "igstqa/image.hpp"

namespace igstqa {

enum class StatFeature { sigma, kurt, skew, entropy };
enum class SpatialFeature { g, r };

/// The six aggregated reference-vs-synthesized distances for one domain.
struct DeltaSet {
  double dk = 0.0;
  double dsigma = 0.0;
  double dskew = 0.0;
  double dentropy = 0.0;
  double dg = 0.0;
  double dr = 0.0;

  double total() const { return dk + dsigma + dskew + dentropy + dg + dr; }
};

/// Final quality index; 0 means identical feature sets, larger means more
/// distorted. Symmetric in its arguments and not a metric (no triangle
/// inequality claimed).
struct QualityScore {
  double value = 0.0;
  double alpha = 0.0;
  int levels = 0;
  std::vector<Domain> domains;
};

/// Scoring configuration; the defaults are the recommended operating point
/// (4 scales, alpha 100, both domains).
struct ScoreConfig {
  int levels = 4;
  double alpha = 100.0;
  std::vector<Domain> domains = {Domain::I, Domain::IGM};
  Boundary boundary = Boundary::symmetric;
};

namespace detail {

inline void check_compatible(const RRFeatureSet& ref, const RRFeatureSet& syn) {
  if (ref.domain != syn.domain || ref.levels != syn.levels ||
      ref.features.size() != syn.features.size())
    throw MismatchError("feature set mismatch");
}

inline double stat_value(const SubbandFeatures& f, StatFeature s) {
  switch (s) {
    case StatFeature::sigma: return f.sigma;
    case StatFeature::kurt: return f.kurt;
    case StatFeature::skew: return f.skew;
    default: return f.entropy;
  }
}

inline double spatial_value(const SubbandFeatures& f, SpatialFeature s) {
  return s == SpatialFeature::g ? f.g : f.r;
}

}  // namespace detail

/// Mean absolute difference of one statistical attribute over all 2L
/// subbands.
inline double delta_stat(const RRFeatureSet& ref, const RRFeatureSet& syn,
                         StatFeature stat) {
  detail::check_compatible(ref, syn);
  double sum = 0.0;
  for (Orientation o : {Orientation::H, Orientation::V})
    for (int j = 1; j <= ref.levels; ++j)
      sum += std::fabs(detail::stat_value(ref.at(o, j), stat) -
                       detail::stat_value(syn.at(o, j), stat));
  return sum / (2.0 * ref.levels);
}

/// Half the worst-scale absolute difference of one spatial attribute, summed
/// over the two orientations.
inline double delta_spatial(const RRFeatureSet& ref, const RRFeatureSet& syn,
                            SpatialFeature stat) {
  detail::check_compatible(ref, syn);
  double total = 0.0;
  for (Orientation o : {Orientation::H, Orientation::V}) {
    double worst = 0.0;
    for (int j = 1; j <= ref.levels; ++j) {
      const double d = std::fabs(detail::spatial_value(ref.at(o, j), stat) -
                                 detail::spatial_value(syn.at(o, j), stat));
      if (d > worst) worst = d;
    }
    total += worst / 2.0;
  }
  return total;
}

/// All six distances for one domain.
inline DeltaSet compute_deltas(const RRFeatureSet& ref, const RRFeatureSet& syn) {
  DeltaSet d;
  d.dk = delta_stat(ref, syn, StatFeature::kurt);
  d.dsigma = delta_stat(ref, syn, StatFeature::sigma);
  d.dskew = delta_stat(ref, syn, StatFeature::skew);
  d.dentropy = delta_stat(ref, syn, StatFeature::entropy);
  d.dg = delta_spatial(ref, syn, SpatialFeature::g);
  d.dr = delta_spatial(ref, syn, SpatialFeature::r);
  return d;
}

/// Aggregates the per-domain delta sums into the final index:
/// sum over domains of ln(1 + alpha * (dK + dsigma + dS + dE + dG + dR)).
inline QualityScore igstqa(std::span<const RRFeatureSet> ref,
                           std::span<const RRFeatureSet> syn, double alpha) {
  if (!(alpha > 0.0)) throw MismatchError("invalid alpha");
  if (ref.empty() || ref.size() != syn.size())
    throw MismatchError("feature set mismatch");

  QualityScore score;
  score.alpha = alpha;
  score.levels = ref.front().levels;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    if (ref[i].domain != syn[i].domain) throw MismatchError("feature set mismatch");
    const DeltaSet d = compute_deltas(ref[i], syn[i]);
    score.value += std::log1p(alpha * d.total());
    score.domains.push_back(ref[i].domain);
  }
  return score;
}

/// End-to-end score of a (reference, synthesized) image pair. The two images
/// may have different dimensions; every feature is size-normalized.
inline QualityScore score_pair(const GrayImage& ref_img, const GrayImage& syn_img,
                               const ScoreConfig& config) {
  const auto ref = extract_rr_features(ref_img, config.levels, config.domains,
                                       config.boundary);
  const auto syn = extract_rr_features(syn_img, config.levels, config.domains,
                                       config.boundary);
  return igstqa(ref, syn, config.alpha);
}

/// Maps the CLI-facing mode names (both | spatial | gradient) to domain lists.
inline std::vector<Domain> domains_from_mode(const std::string& mode) {
  if (mode == "both") return {Domain::I, Domain::IGM};
  if (mode == "spatial") return {Domain::I};
  if (mode == "gradient") return {Domain::IGM};
  throw InputError("unknown domain mode: " + mode);
}

inline std::string mode_from_domains(std::span<const Domain> domains) {
  if (domains.size() == 2) return "both";
  if (domains.size() == 1)
    return domains.front() == Domain::I ? "spatial" : "gradient";
  throw InputError("unknown domain mode");
}

}  // namespace igstqa
