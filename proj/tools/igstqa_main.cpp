// Copyright (c) 2026 the igstqa authors
// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: feature extraction (sender side), scoring
// (receiver side), dataset evaluation, and distortion generation. Results go
// to stdout, diagnostics to stderr, so scores are pipeline-composable.

#include <unistd.h>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "igstqa/distortion.hpp"
#include "igstqa/error.hpp"
#include "igstqa/eval.hpp"
#include "igstqa/image_io.hpp"
#include "igstqa/index.hpp"
#include "igstqa/rr_codec.hpp"

namespace {

struct CliOptions {
  int levels = 4;
  double alpha = 100.0;
  std::string domains = "both";
  std::string boundary = "symmetric";
};

void add_config_flags(CLI::App* cmd, CliOptions& opts) {
  cmd->add_option("--levels", opts.levels, "Decomposition levels")
      ->default_val(4);
  cmd->add_option("--alpha", opts.alpha, "Distance scaling constant")
      ->default_val(100.0);
  cmd->add_option("--domains", opts.domains,
                  "Feature domains: both | spatial | gradient")
      ->default_val("both");
  cmd->add_option("--boundary", opts.boundary,
                  "Boundary handling: symmetric | periodic (test mode)")
      ->default_val("symmetric");
}

igstqa::ScoreConfig to_score_config(const CliOptions& opts) {
  igstqa::ScoreConfig cfg;
  if (opts.levels < 1) throw igstqa::InputError("levels must be at least 1");
  if (!(opts.alpha > 0.0)) throw igstqa::MismatchError("invalid alpha");
  cfg.levels = opts.levels;
  cfg.alpha = opts.alpha;
  cfg.domains = igstqa::domains_from_mode(opts.domains);
  if (opts.boundary == "symmetric")
    cfg.boundary = igstqa::Boundary::symmetric;
  else if (opts.boundary == "periodic")
    cfg.boundary = igstqa::Boundary::periodic;
  else
    throw igstqa::InputError("unknown boundary mode: " + opts.boundary);
  return cfg;
}

int cmd_extract(const std::string& ref_path, const std::string& out_path,
                const CliOptions& opts) {
  const igstqa::ScoreConfig cfg = to_score_config(opts);
  const igstqa::GrayImage ref = igstqa::load_gray_image(ref_path);

  igstqa::RRPayload payload;
  payload.levels = cfg.levels;
  payload.alpha = cfg.alpha;
  payload.image_id = igstqa::image_content_id(ref);
  payload.feature_sets =
      igstqa::extract_rr_features(ref, cfg.levels, cfg.domains, cfg.boundary);

  const std::string bytes = igstqa::encode(payload);
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw igstqa::InputError("cannot write payload: " + out_path);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw igstqa::InputError("cannot write payload: " + out_path);

  const std::size_t scalars = payload.feature_sets.size() *
                              static_cast<std::size_t>(12 * cfg.levels);
  std::cout << scalars << " scalars, " << bytes.size() << " bytes\n";
  return 0;
}

int cmd_score(const std::string& ref_path, const std::string& syn_path,
              const CliOptions& opts) {
  const igstqa::ScoreConfig cfg = to_score_config(opts);
  const igstqa::GrayImage syn = igstqa::load_gray_image(syn_path);

  double value = 0.0;
  if (igstqa::has_payload_extension(ref_path)) {
    const igstqa::RRPayload payload = igstqa::load_payload(ref_path);
    if (payload.levels != cfg.levels)
      throw igstqa::MismatchError("feature set mismatch");
    std::vector<igstqa::Domain> payload_domains;
    for (const igstqa::RRFeatureSet& set : payload.feature_sets)
      payload_domains.push_back(set.domain);
    if (payload_domains != cfg.domains)
      throw igstqa::MismatchError("feature set mismatch");
    const auto syn_sets =
        igstqa::extract_rr_features(syn, cfg.levels, cfg.domains, cfg.boundary);
    value = igstqa::igstqa(payload.feature_sets, syn_sets, cfg.alpha).value;
  } else {
    const igstqa::GrayImage ref = igstqa::load_gray_image(ref_path);
    value = igstqa::score_pair(ref, syn, cfg).value;
  }
  std::cout << igstqa::detail::format_double(value) << '\n';
  return 0;
}

int cmd_evaluate(const std::string& manifest_path, const std::string& report_path,
                 const std::string& compare, int jobs, const CliOptions& opts) {
  const igstqa::ScoreConfig cfg = to_score_config(opts);
  if (jobs < 1) throw igstqa::InputError("jobs must be at least 1");

  igstqa::CompareSet compare_set = igstqa::CompareSet::none;
  if (compare == "syntex")
    compare_set = igstqa::CompareSet::syntex;
  else if (compare == "parametric")
    compare_set = igstqa::CompareSet::parametric;
  else if (compare != "none")
    throw igstqa::InputError("unknown compare set: " + compare);

  const igstqa::BenchmarkResult result =
      igstqa::run_benchmark(manifest_path, cfg, jobs);

  if (!report_path.empty()) {
    const std::string json = igstqa::write_report_json(result.report, cfg);
    std::ofstream out(report_path, std::ios::binary);
    if (!out) throw igstqa::InputError("cannot write report: " + report_path);
    out.write(json.data(), static_cast<std::streamsize>(json.size()));
    if (!out) throw igstqa::InputError("cannot write report: " + report_path);
  }

  const bool styled =
      isatty(STDOUT_FILENO) != 0 && std::getenv("IGSTQA_NO_COLOR") == nullptr;
  std::cout << igstqa::format_report_table(result.report, compare_set, styled);
  return 0;
}

int cmd_distort(const std::string& in_path, const std::string& spec_string,
                const std::string& out_path) {
  const igstqa::GrayImage img = igstqa::load_gray_image(in_path);
  const igstqa::DistortionSpec spec = igstqa::parse_distortion_spec(spec_string);
  igstqa::save_gray_image(out_path, igstqa::apply_distortion(img, spec));
  return 0;
}

int run(int argc, char** argv) {
  CLI::App app{"IGSTQA: reduced-reference synthesized-texture quality assessment"};
  app.require_subcommand(1);

  std::string ref_path, syn_path, out_path, in_path, spec_string;
  std::string manifest_path, report_path, compare = "none";
  int jobs = 1;
  CliOptions extract_opts, score_opts, eval_opts;

  CLI::App* extract =
      app.add_subcommand("extract", "Extract a reduced-reference feature payload");
  extract->add_option("ref", ref_path, "Reference image (PNG or PGM)")->required();
  extract->add_option("out", out_path, "Output payload path (.igstqa.json)")
      ->required();
  add_config_flags(extract, extract_opts);

  CLI::App* score = app.add_subcommand("score", "Score a synthesized image");
  score->add_option("ref", ref_path, "Reference image or .igstqa.json payload")
      ->required();
  score->add_option("syn", syn_path, "Synthesized image")->required();
  add_config_flags(score, score_opts);

  CLI::App* evaluate =
      app.add_subcommand("evaluate", "Score a manifest and report PLCC/SROCC/RMSE");
  evaluate->add_option("manifest", manifest_path, "CSV manifest (pair_id,ref,syn,dmos)")
      ->required();
  evaluate->add_option("--report", report_path, "Write report JSON to this path");
  evaluate->add_option("--jobs", jobs, "Parallel scoring threads")->default_val(1);
  evaluate->add_option("--compare", compare,
                       "Side-by-side published results: none | syntex | parametric")
      ->default_val("none");
  add_config_flags(evaluate, eval_opts);

  CLI::App* distort =
      app.add_subcommand("distort", "Apply a controlled degradation to an image");
  distort->add_option("input", in_path, "Input image")->required();
  distort->add_option("spec", spec_string, "Degradation spec: kind:magnitude[:seed]")
      ->required();
  distort->add_option("out", out_path, "Output image (.png or .pgm)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  if (extract->parsed()) return cmd_extract(ref_path, out_path, extract_opts);
  if (score->parsed()) return cmd_score(ref_path, syn_path, score_opts);
  if (evaluate->parsed())
    return cmd_evaluate(manifest_path, report_path, compare, jobs, eval_opts);
  return cmd_distort(in_path, spec_string, out_path);
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const igstqa::InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const igstqa::MismatchError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const igstqa::InsufficientDataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  } catch (const igstqa::NumericalError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 5;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 5;
  }
}
