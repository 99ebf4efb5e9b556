// Copyright (c) 2026 the igstqa authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "igstqa/error.hpp"
#include "igstqa/image_io.hpp"
#include "igstqa/index.hpp"
#include "igstqa/rr_codec.hpp"

namespace igstqa {

/// One scored pair: objective IGSTQA value vs subjective DMOS (higher DMOS =
/// worse quality). IGSTQA is positively oriented with DMOS, so scores are
/// never negated before fitting.
struct EvalRecord {
  std::string pair_id;
  double objective = 0.0;
  double subjective = 0.0;
};

struct EvalReport {
  double plcc = 0.0;
  double srocc = 0.0;
  double rmse = 0.0;
  std::array<double, 4> logistic_params{};
  int n = 0;
};

/// Average (fractional) ranks, 1-based; ties share the mean of the positions
/// they occupy.
inline std::vector<double> average_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double shared = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = shared;
    i = j + 1;
  }
  return ranks;
}

inline double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw MismatchError("length mismatch");
  if (x.size() < 3) throw InsufficientDataError("insufficient data");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    syy += y[i] * y[i];
    sxy += x[i] * y[i];
  }
  const double cov = sxy - sx * sy / n;
  const double vx = sxx - sx * sx / n;
  const double vy = syy - sy * sy / n;
  const double denom = std::sqrt(vx * vy);
  if (!(denom > 0.0) || !std::isfinite(denom))
    throw InsufficientDataError("degenerate input");
  return std::clamp(cov / denom, -1.0, 1.0);
}

/// Spearman rank-order correlation: Pearson over average-rank vectors.
inline double srocc(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw MismatchError("length mismatch");
  if (x.size() < 3) throw InsufficientDataError("insufficient data");
  const auto constant = [](std::span<const double> v) {
    for (double e : v)
      if (e != v.front()) return false;
    return true;
  };
  if (constant(x) || constant(y))
    throw InsufficientDataError("degenerate ranking");
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  return pearson(rx, ry);
}

inline double srocc(std::span<const EvalRecord> records) {
  std::vector<double> obj, subj;
  obj.reserve(records.size());
  subj.reserve(records.size());
  for (const EvalRecord& r : records) {
    obj.push_back(r.objective);
    subj.push_back(r.subjective);
  }
  return srocc(obj, subj);
}

inline double rmse(std::span<const double> mapped, std::span<const double> subjective) {
  if (mapped.size() != subjective.size()) throw MismatchError("length mismatch");
  if (mapped.empty()) throw InsufficientDataError("insufficient data");
  double acc = 0.0;
  for (std::size_t i = 0; i < mapped.size(); ++i) {
    const double d = mapped[i] - subjective[i];
    acc += d * d;
  }
  return std::sqrt(acc / static_cast<double>(mapped.size()));
}

inline std::pair<double, double> plcc_rmse(std::span<const double> mapped,
                                           std::span<const double> subjective) {
  return {pearson(mapped, subjective), rmse(mapped, subjective)};
}

/// 4-parameter logistic used to regress objective scores onto DMOS.
inline double logistic(double x, const std::array<double, 4>& b) {
  return b[0] * (0.5 - 1.0 / (1.0 + std::exp(b[1] * (x - b[2])))) + b[3];
}

struct LogisticFit {
  std::array<double, 4> params{};
  std::vector<double> mapped;
  double sse = 0.0;
};

namespace detail {

inline double fit_sse(const std::array<double, 4>& b,
                      std::span<const double> x, std::span<const double> y) {
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = logistic(x[i], b) - y[i];
    acc += d * d;
  }
  return std::isfinite(acc) ? acc : std::numeric_limits<double>::infinity();
}

/// Derivative-free simplex descent (reflection 1, expansion 2, contraction
/// 0.5, shrink 0.5); stops when the simplex spread falls below 1e-9 or after
/// 2000 iterations. Deterministic for a given start.
template <typename F>
std::pair<std::array<double, 4>, double> nelder_mead(std::array<double, 4> start, F f) {
  constexpr int kDim = 4;
  constexpr int kMaxIter = 2000;
  constexpr double kTol = 1e-9;

  std::array<std::array<double, 4>, kDim + 1> v;
  std::array<double, kDim + 1> fv;
  v[0] = start;
  for (int i = 0; i < kDim; ++i) {
    v[static_cast<std::size_t>(i) + 1] = start;
    double& p = v[static_cast<std::size_t>(i) + 1][static_cast<std::size_t>(i)];
    p = p != 0.0 ? p * 1.05 : 0.00025;
  }
  for (std::size_t i = 0; i <= kDim; ++i) fv[i] = f(v[i]);

  std::array<std::size_t, kDim + 1> idx{};
  for (int iter = 0; iter < kMaxIter; ++iter) {
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });

    double spread = 0.0;
    for (std::size_t i = 1; i <= kDim; ++i)
      for (int k = 0; k < kDim; ++k)
        spread = std::max(spread, std::fabs(v[idx[i]][static_cast<std::size_t>(k)] -
                                            v[idx[0]][static_cast<std::size_t>(k)]));
    if (spread < kTol) break;

    const std::size_t worst = idx[kDim];
    std::array<double, 4> centroid{};
    for (std::size_t i = 0; i < kDim; ++i)
      for (int k = 0; k < kDim; ++k)
        centroid[static_cast<std::size_t>(k)] +=
            v[idx[i]][static_cast<std::size_t>(k)] / kDim;

    const auto blend = [&](double t) {
      std::array<double, 4> p{};
      for (int k = 0; k < kDim; ++k)
        p[static_cast<std::size_t>(k)] =
            centroid[static_cast<std::size_t>(k)] +
            t * (centroid[static_cast<std::size_t>(k)] -
                 v[worst][static_cast<std::size_t>(k)]);
      return p;
    };

    const auto reflected = blend(1.0);
    const double fr = f(reflected);
    if (fr < fv[idx[0]]) {
      const auto expanded = blend(2.0);
      const double fe = f(expanded);
      if (fe < fr) {
        v[worst] = expanded;
        fv[worst] = fe;
      } else {
        v[worst] = reflected;
        fv[worst] = fr;
      }
      continue;
    }
    if (fr < fv[idx[kDim - 1]]) {
      v[worst] = reflected;
      fv[worst] = fr;
      continue;
    }
    const bool outside = fr < fv[worst];
    const auto contracted = blend(outside ? 0.5 : -0.5);
    const double fc = f(contracted);
    if (fc <= (outside ? fr : fv[worst])) {
      v[worst] = contracted;
      fv[worst] = fc;
      continue;
    }
    for (std::size_t i = 1; i <= kDim; ++i) {
      for (int k = 0; k < kDim; ++k)
        v[idx[i]][static_cast<std::size_t>(k)] =
            v[idx[0]][static_cast<std::size_t>(k)] +
            0.5 * (v[idx[i]][static_cast<std::size_t>(k)] -
                   v[idx[0]][static_cast<std::size_t>(k)]);
      fv[idx[i]] = f(v[idx[i]]);
    }
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i <= kDim; ++i)
    if (fv[i] < fv[best]) best = i;
  return {v[best], fv[best]};
}

}  // namespace detail

/// Fits q(x) = b1*(1/2 - 1/(1+exp(b2*(x-b3)))) + b4 by least squares. Two
/// deterministic starts are tried: the moment-based initialization (b1 =
/// subjective range, b2 = 1/std(objective), b3 = mean(objective), b4 =
/// mean(subjective)) and a near-linear seed matched to the least-squares
/// line, which keeps affine relationships in the logistic's linear regime.
/// The lower-SSE fit wins.
inline LogisticFit logistic_fit(std::span<const EvalRecord> records) {
  if (records.size() < 5) throw InsufficientDataError("insufficient data");

  std::vector<double> x, y;
  x.reserve(records.size());
  y.reserve(records.size());
  for (const EvalRecord& r : records) {
    x.push_back(r.objective);
    y.push_back(r.subjective);
  }
  const double n = static_cast<double>(x.size());
  const double mean_x = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double mean_y = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double var_x = 0.0, cov_xy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    var_x += (x[i] - mean_x) * (x[i] - mean_x);
    cov_xy += (x[i] - mean_x) * (y[i] - mean_y);
  }
  var_x /= n;
  cov_xy /= n;
  const double std_x = std::sqrt(var_x);
  const double range_y =
      *std::max_element(y.begin(), y.end()) - *std::min_element(y.begin(), y.end());

  const auto f = [&](const std::array<double, 4>& b) {
    return detail::fit_sse(b, x, y);
  };

  std::array<double, 4> moment_start = {range_y != 0.0 ? range_y : 1.0,
                                        std_x > 0.0 ? 1.0 / std_x : 1.0, mean_x,
                                        mean_y};
  auto [best, best_sse] = detail::nelder_mead(moment_start, f);

  if (std_x > 0.0) {
    const double slope = cov_xy / var_x;
    const double t = 1e-4;
    // With b3 = mean_x the matched intercept b4 = slope*b3 + intercept
    // collapses to mean_y.
    const std::array<double, 4> linear_start = {
        slope != 0.0 ? 4.0 * slope * std_x / t : range_y != 0.0 ? range_y : 1.0,
        t / std_x, mean_x, mean_y};
    auto [alt, alt_sse] = detail::nelder_mead(linear_start, f);
    if (alt_sse < best_sse) {
      best = alt;
      best_sse = alt_sse;
    }
  }

  LogisticFit fit;
  fit.params = best;
  fit.sse = best_sse;
  fit.mapped.reserve(x.size());
  for (double xi : x) fit.mapped.push_back(logistic(xi, best));
  return fit;
}

/// One manifest row: pair id, reference path (image or payload), synthesized
/// image path, DMOS.
struct ManifestRow {
  std::string pair_id;
  std::string ref;
  std::string syn;
  double dmos = 0.0;
};

inline constexpr std::string_view kManifestHeader = "pair_id,ref,syn,dmos";

inline std::vector<ManifestRow> read_manifest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read manifest: " + path);

  std::vector<ManifestRow> rows;
  std::string line;
  bool saw_header = false;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!saw_header) {
      if (line != kManifestHeader)
        throw InputError("bad manifest header: expected " + std::string(kManifestHeader));
      saw_header = true;
      continue;
    }
    std::array<std::string, 4> fields;
    std::size_t field = 0, start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
      if (i == line.size() || line[i] == ',') {
        if (field >= 4) throw InputError("bad manifest row " + std::to_string(line_no));
        fields[field++] = line.substr(start, i - start);
        start = i + 1;
      }
    }
    if (field != 4 || fields[0].empty() || fields[1].empty() || fields[2].empty())
      throw InputError("bad manifest row " + std::to_string(line_no));
    ManifestRow row;
    row.pair_id = fields[0];
    row.ref = fields[1];
    row.syn = fields[2];
    const std::string& d = fields[3];
    const auto res = std::from_chars(d.data(), d.data() + d.size(), row.dmos);
    if (res.ec != std::errc() || res.ptr != d.data() + d.size() ||
        !std::isfinite(row.dmos))
      throw InputError("bad manifest row " + std::to_string(line_no));
    rows.push_back(std::move(row));
  }
  if (!saw_header)
    throw InputError("bad manifest header: expected " + std::string(kManifestHeader));
  return rows;
}

namespace detail {

inline std::string resolve_path(const std::string& base_dir, const std::string& path) {
  const std::filesystem::path p(path);
  if (p.is_absolute() || base_dir.empty()) return path;
  return (std::filesystem::path(base_dir) / p).string();
}

inline double score_row(const ManifestRow& row, const std::string& base_dir,
                        const ScoreConfig& config) {
  const std::string ref_path = resolve_path(base_dir, row.ref);
  const std::string syn_path = resolve_path(base_dir, row.syn);
  const GrayImage syn = load_gray_image(syn_path);
  if (has_payload_extension(ref_path)) {
    const RRPayload payload = load_payload(ref_path);
    if (payload.levels != config.levels) throw MismatchError("feature set mismatch");
    std::vector<Domain> payload_domains;
    for (const RRFeatureSet& set : payload.feature_sets)
      payload_domains.push_back(set.domain);
    if (payload_domains != config.domains)
      throw MismatchError("feature set mismatch");
    const auto syn_sets =
        extract_rr_features(syn, config.levels, config.domains, config.boundary);
    return igstqa(payload.feature_sets, syn_sets, config.alpha).value;
  }
  const GrayImage ref = load_gray_image(ref_path);
  return score_pair(ref, syn, config).value;
}

[[noreturn]] inline void rethrow_with_row(const std::string& pair_id) {
  try {
    throw;
  } catch (const MismatchError& e) {
    throw MismatchError("row " + pair_id + ": " + e.what());
  } catch (const InsufficientDataError& e) {
    throw InsufficientDataError("row " + pair_id + ": " + e.what());
  } catch (const NumericalError& e) {
    throw NumericalError("row " + pair_id + ": " + e.what());
  } catch (const Error& e) {
    throw InputError("row " + pair_id + ": " + e.what());
  } catch (const std::exception& e) {
    throw InputError("row " + pair_id + ": " + e.what());
  }
}

}  // namespace detail

/// Scores every manifest row; any failing row aborts the run with that row's
/// id (silent omission would bias the correlation statistics). Rows may be
/// scored in parallel; the output is sorted by pair_id and independent of
/// the thread count.
inline std::vector<EvalRecord> score_manifest(std::span<const ManifestRow> rows,
                                              const std::string& base_dir,
                                              const ScoreConfig& config,
                                              int jobs = 1) {
  std::vector<EvalRecord> records(rows.size());
  std::vector<std::exception_ptr> errors(rows.size());

  const auto work = [&](std::size_t i) {
    try {
      records[i].pair_id = rows[i].pair_id;
      records[i].subjective = rows[i].dmos;
      records[i].objective = detail::score_row(rows[i], base_dir, config);
      if (!std::isfinite(records[i].objective))
        throw NumericalError("non-finite score");
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };

  if (jobs <= 1 || rows.size() <= 1) {
    for (std::size_t i = 0; i < rows.size(); ++i) work(i);
  } else {
    std::atomic<std::size_t> next{0};
    const std::size_t nthreads =
        std::min(static_cast<std::size_t>(jobs), rows.size());
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (std::size_t t = 0; t < nthreads; ++t)
      pool.emplace_back([&] {
        while (true) {
          const std::size_t i = next.fetch_add(1);
          if (i >= rows.size()) return;
          work(i);
        }
      });
    for (std::thread& t : pool) t.join();
  }

  for (std::size_t i = 0; i < rows.size(); ++i)
    if (errors[i]) {
      try {
        std::rethrow_exception(errors[i]);
      } catch (...) {
        detail::rethrow_with_row(rows[i].pair_id);
      }
    }

  std::stable_sort(records.begin(), records.end(),
                   [](const EvalRecord& a, const EvalRecord& b) {
                     return a.pair_id < b.pair_id;
                   });
  return records;
}

struct BenchmarkResult {
  EvalReport report;
  std::vector<EvalRecord> records;
  std::vector<double> mapped;
};

/// Full protocol: score the manifest, fit the logistic regression, compute
/// PLCC/RMSE on the mapped scores and SROCC on the raw scores.
inline BenchmarkResult run_benchmark(const std::string& manifest_path,
                                     const ScoreConfig& config, int jobs = 1) {
  const auto rows = read_manifest(manifest_path);
  if (rows.size() < 5) throw InsufficientDataError("insufficient data");
  const std::string base_dir =
      std::filesystem::path(manifest_path).parent_path().string();

  BenchmarkResult result;
  result.records = score_manifest(rows, base_dir, config, jobs);

  const LogisticFit fit = logistic_fit(result.records);
  std::vector<double> subjective;
  subjective.reserve(result.records.size());
  for (const EvalRecord& r : result.records) subjective.push_back(r.subjective);

  const auto [plcc, err] = plcc_rmse(fit.mapped, subjective);
  result.report.plcc = plcc;
  result.report.rmse = err;
  result.report.srocc = srocc(result.records);
  result.report.logistic_params = fit.params;
  result.report.n = static_cast<int>(result.records.size());
  result.mapped = fit.mapped;
  return result;
}

/// Canonical report JSON: fixed key order, shortest round-trip reals, LF
/// endings. Deliberately omits runtime-only knobs (jobs) so reports are
/// byte-identical across parallelism settings.
inline std::string write_report_json(const EvalReport& report,
                                     const ScoreConfig& config) {
  std::string out;
  out += "{\n";
  out += "  \"plcc\": " + detail::format_double(report.plcc) + ",\n";
  out += "  \"srocc\": " + detail::format_double(report.srocc) + ",\n";
  out += "  \"rmse\": " + detail::format_double(report.rmse) + ",\n";
  out += "  \"logistic_params\": [";
  for (std::size_t i = 0; i < report.logistic_params.size(); ++i) {
    if (i) out += ", ";
    out += detail::format_double(report.logistic_params[i]);
  }
  out += "],\n";
  out += "  \"n\": " + std::to_string(report.n) + ",\n";
  out += "  \"config\": {\n";
  out += "    \"levels\": " + std::to_string(config.levels) + ",\n";
  out += "    \"alpha\": " + detail::format_double(config.alpha) + ",\n";
  out += "    \"domains\": \"" + mode_from_domains(config.domains) + "\",\n";
  out += std::string("    \"boundary\": \"") +
         (config.boundary == Boundary::symmetric ? "symmetric" : "periodic") +
         "\"\n";
  out += "  }\n";
  out += "}\n";
  return out;
}

/// Published results available for side-by-side comparison in the report
/// table. "Competitor" rows carry the strongest previously reported SROCC on
/// each database.
enum class CompareSet { none, syntex, parametric };

struct PublishedResult {
  const char* label;
  double plcc;
  double srocc;
  double rmse;
};

inline constexpr PublishedResult kSyntexPublished[] = {
    {"IGSTQA (published)", 0.816, 0.820, 0.718},
    {"STQA (published)", 0.770, 0.777, 0.792},
};
inline constexpr PublishedResult kParametricPublished[] = {
    {"IGSTQA (published)", 0.733, 0.679, 0.170},
    {"STQA (published)", 0.532, 0.520, 0.250},
};

inline std::string format_report_table(const EvalReport& report, CompareSet compare,
                                       bool styled) {
  const auto fmt = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return std::string(buf);
  };
  const auto row = [](const std::string& label, const std::string& plcc,
                      const std::string& srocc_s, const std::string& rmse_s,
                      const std::string& n) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%-22s %9s %9s %9s %7s\n", label.c_str(),
                  plcc.c_str(), srocc_s.c_str(), rmse_s.c_str(), n.c_str());
    return std::string(buf);
  };

  std::string out;
  std::string header = row("Result", "PLCC", "SROCC", "RMSE", "n");
  if (styled) header = "\033[1m" + header + "\033[0m";
  out += header;
  out += row("this run", fmt(report.plcc), fmt(report.srocc), fmt(report.rmse),
             std::to_string(report.n));

  if (compare != CompareSet::none) {
    const auto& published =
        compare == CompareSet::syntex ? kSyntexPublished : kParametricPublished;
    for (const PublishedResult& p : published)
      out += row(p.label, fmt(p.plcc), fmt(p.srocc), fmt(p.rmse), "-");
    const double competitor = published[1].srocc;
    out += "\nSROCC exceeds strongest published competitor (STQA " +
           fmt(competitor) + "): " + (report.srocc > competitor ? "yes" : "no") +
           "\n";
  }
  return out;
}

}  // namespace igstqa
