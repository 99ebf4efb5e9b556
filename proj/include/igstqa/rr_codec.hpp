// Copyright (c) 2026 the igstqa authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "igstqa/error.hpp"
#include "igstqa/features.hpp"
#include "igstqa/image.hpp"

namespace igstqa {

/// The reduced-reference payload sent over the ancillary channel. Everything
/// the receiver needs to score a synthesized image against the reference:
/// config echo, a content hash identifying the reference, and 12L scalars per
/// domain.
struct RRPayload {
  int format_version = 1;
  std::string wavelet_id = "haar-atrous";
  int levels = 4;
  double alpha = 100.0;
  std::string image_id;
  std::vector<RRFeatureSet> feature_sets;

  friend bool operator==(const RRPayload&, const RRPayload&) = default;
};

inline constexpr std::string_view kPayloadExtension = ".igstqa.json";
inline constexpr std::string_view kWaveletId = "haar-atrous";

inline bool has_payload_extension(std::string_view path) {
  return path.size() >= kPayloadExtension.size() &&
         path.substr(path.size() - kPayloadExtension.size()) == kPayloadExtension;
}

namespace detail {

/// Shortest decimal string that parses back to exactly the same double.
/// "-0" alone would be read back as the integer 0, so it gets a decimal
/// point to preserve the sign bit.
inline std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  std::string s(buf, res.ptr);
  if (s == "-0") s = "-0.0";
  return s;
}

inline void append_feature_value(std::string& out, const char* key, double v) {
  if (!std::isfinite(v)) throw NumericalError("non-finite feature");
  out += '"';
  out += key;
  out += "\": ";
  out += format_double(v);
}

}  // namespace detail

/// Canonical JSON bytes: fixed key order, shortest round-trip reals, LF line
/// endings, one line per subband. Equal payloads encode to identical bytes.
inline std::string encode(const RRPayload& payload) {
  if (!std::isfinite(payload.alpha)) throw NumericalError("non-finite feature");

  std::string out;
  out.reserve(256 + payload.feature_sets.size() * payload.levels * 2 * 160);
  out += "{\n";
  out += "  \"format_version\": " + std::to_string(payload.format_version) + ",\n";
  out += "  \"wavelet_id\": \"" + payload.wavelet_id + "\",\n";
  out += "  \"levels\": " + std::to_string(payload.levels) + ",\n";
  out += "  \"alpha\": " + detail::format_double(payload.alpha) + ",\n";
  out += "  \"image_id\": \"" + payload.image_id + "\",\n";
  out += "  \"feature_sets\": [";
  for (std::size_t s = 0; s < payload.feature_sets.size(); ++s) {
    const RRFeatureSet& set = payload.feature_sets[s];
    out += s == 0 ? "\n" : ",\n";
    out += "    {\n";
    out += "      \"domain\": \"" + std::string(to_string(set.domain)) + "\",\n";
    out += "      \"levels\": " + std::to_string(set.levels) + ",\n";
    out += "      \"features\": [";
    for (int i = 0; i < static_cast<int>(set.features.size()); ++i) {
      const Orientation o = i < set.levels ? Orientation::H : Orientation::V;
      const int scale = i % set.levels + 1;
      const SubbandFeatures& f = set.features[static_cast<std::size_t>(i)];
      out += i == 0 ? "\n" : ",\n";
      out += "        {\"orientation\": \"";
      out += o == Orientation::H ? 'H' : 'V';
      out += "\", \"scale\": " + std::to_string(scale) + ", ";
      detail::append_feature_value(out, "g", f.g);
      out += ", ";
      detail::append_feature_value(out, "r", f.r);
      out += ", ";
      detail::append_feature_value(out, "sigma", f.sigma);
      out += ", ";
      detail::append_feature_value(out, "kurt", f.kurt);
      out += ", ";
      detail::append_feature_value(out, "skew", f.skew);
      out += ", ";
      detail::append_feature_value(out, "entropy", f.entropy);
      out += "}";
    }
    out += "\n      ]\n";
    out += "    }";
  }
  out += "\n  ]\n";
  out += "}\n";
  return out;
}

namespace detail {

[[noreturn]] inline void corrupt() { throw InputError("corrupt payload"); }

inline double number_field(const nlohmann::json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end() || !it->is_number()) corrupt();
  return it->get<double>();
}

inline int int_field(const nlohmann::json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end() || !it->is_number_integer()) corrupt();
  return it->get<int>();
}

inline std::string string_field(const nlohmann::json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) corrupt();
  return it->get<std::string>();
}

}  // namespace detail

/// Parses and validates payload bytes. Unknown versions are rejected before
/// any shape checks; any structural violation (wrong counts, bad tags,
/// out-of-order subband slots) is reported as corruption.
inline RRPayload decode(std::string_view bytes) {
  const nlohmann::json doc =
      nlohmann::json::parse(bytes, /*cb=*/nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) throw InputError("parse error");
  if (!doc.is_object()) detail::corrupt();

  RRPayload p;
  p.format_version = detail::int_field(doc, "format_version");
  if (p.format_version != 1) throw InputError("unsupported payload version");
  p.wavelet_id = detail::string_field(doc, "wavelet_id");
  p.levels = detail::int_field(doc, "levels");
  p.alpha = detail::number_field(doc, "alpha");
  p.image_id = detail::string_field(doc, "image_id");
  if (p.levels < 1) detail::corrupt();

  const auto sets = doc.find("feature_sets");
  if (sets == doc.end() || !sets->is_array() || sets->empty()) detail::corrupt();

  for (const nlohmann::json& set_doc : *sets) {
    if (!set_doc.is_object()) detail::corrupt();
    RRFeatureSet set;
    const std::string domain_tag = detail::string_field(set_doc, "domain");
    if (domain_tag == "I")
      set.domain = Domain::I;
    else if (domain_tag == "IGM")
      set.domain = Domain::IGM;
    else
      detail::corrupt();
    set.levels = detail::int_field(set_doc, "levels");
    if (set.levels != p.levels) detail::corrupt();

    const auto features = set_doc.find("features");
    if (features == set_doc.end() || !features->is_array() ||
        features->size() != static_cast<std::size_t>(2 * set.levels))
      detail::corrupt();

    int slot = 0;
    for (const nlohmann::json& f_doc : *features) {
      if (!f_doc.is_object() || f_doc.size() != 8) detail::corrupt();
      const std::string orientation = detail::string_field(f_doc, "orientation");
      const char expected = slot < set.levels ? 'H' : 'V';
      if (orientation.size() != 1 || orientation[0] != expected) detail::corrupt();
      if (detail::int_field(f_doc, "scale") != slot % set.levels + 1)
        detail::corrupt();
      SubbandFeatures f;
      f.g = detail::number_field(f_doc, "g");
      f.r = detail::number_field(f_doc, "r");
      f.sigma = detail::number_field(f_doc, "sigma");
      f.kurt = detail::number_field(f_doc, "kurt");
      f.skew = detail::number_field(f_doc, "skew");
      f.entropy = detail::number_field(f_doc, "entropy");
      set.features.push_back(f);
      ++slot;
    }
    p.feature_sets.push_back(std::move(set));
  }
  return p;
}

/// Content hash identifying a grayscale image: FNV-1a 64 over the dimensions
/// and the raw bit patterns of every sample, row-major.
inline std::string image_content_id(const GrayImage& img) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  const auto mix = [&h](std::uint64_t v) {
    for (int byte = 0; byte < 8; ++byte) {
      h ^= (v >> (8 * byte)) & 0xffULL;
      h *= 0x100000001b3ULL;
    }
  };
  mix(static_cast<std::uint64_t>(img.rows));
  mix(static_cast<std::uint64_t>(img.cols));
  for (double v : img.data) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof(bits));
    mix(bits);
  }
  std::ostringstream os;
  os << "fnv1a64:" << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

inline void save_payload(const std::string& path, const RRPayload& payload) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write payload: " + path);
  const std::string bytes = encode(payload);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw InputError("cannot write payload: " + path);
}

inline RRPayload load_payload(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read payload: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return decode(buf.str());
}

}  // namespace igstqa
