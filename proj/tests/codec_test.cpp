// Copyright (c) 2026 the igstqa authors
// SPDX-License-Identifier: Apache-2.0

#include "igstqa/rr_codec.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <string>

#include "igstqa/features.hpp"
#include "igstqa/rng.hpp"
#include "support/textures.hpp"

namespace igstqa {
namespace {

std::uint64_t bits(double v) {
  std::uint64_t b;
  std::memcpy(&b, &v, sizeof(b));
  return b;
}

RRPayload random_payload(SplitMix64& rng) {
  RRPayload p;
  p.levels = 1 + static_cast<int>(rng.next_below(5));
  p.alpha = 1.0 + rng.next_unit() * 200.0;
  p.image_id = "fnv1a64:" + std::to_string(rng.next());
  const int domains = rng.next_below(2) == 0 ? 2 : 1;
  for (int d = 0; d < domains; ++d) {
    RRFeatureSet set;
    set.domain = d == 0 ? Domain::I : Domain::IGM;
    set.levels = p.levels;
    for (int i = 0; i < 2 * p.levels; ++i) {
      SubbandFeatures f;
      const auto draw = [&rng]() -> double {
        switch (rng.next_below(6)) {
          case 0: return 0.0;
          case 1: return -0.0;
          case 2: return (rng.next_unit() - 0.5) * 1e-12;
          case 3: return (rng.next_unit() - 0.5) * 1e12;
          default: return (rng.next_unit() - 0.5) * 8.0;
        }
      };
      f.g = draw();
      f.r = draw();
      f.sigma = draw();
      f.kurt = draw();
      f.skew = draw();
      f.entropy = draw();
      set.features.push_back(f);
    }
    p.feature_sets.push_back(std::move(set));
  }
  return p;
}

TEST(Codec, RoundTripIsBitExact) {
  SplitMix64 rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const RRPayload p = random_payload(rng);
    const RRPayload q = decode(encode(p));
    ASSERT_EQ(p, q) << "trial " << trial;
    for (std::size_t s = 0; s < p.feature_sets.size(); ++s)
      for (std::size_t i = 0; i < p.feature_sets[s].features.size(); ++i) {
        const SubbandFeatures& a = p.feature_sets[s].features[i];
        const SubbandFeatures& b = q.feature_sets[s].features[i];
        ASSERT_EQ(bits(a.g), bits(b.g));
        ASSERT_EQ(bits(a.r), bits(b.r));
        ASSERT_EQ(bits(a.sigma), bits(b.sigma));
        ASSERT_EQ(bits(a.kurt), bits(b.kurt));
        ASSERT_EQ(bits(a.skew), bits(b.skew));
        ASSERT_EQ(bits(a.entropy), bits(b.entropy));
      }
  }
}

TEST(Codec, EncodeIsDeterministic) {
  SplitMix64 rng(7);
  const RRPayload p = random_payload(rng);
  EXPECT_EQ(encode(p), encode(p));
}

TEST(Codec, ScalarCountsInJson) {
  const GrayImage img = test::noise_texture(64, 64, 42);
  RRPayload p;
  p.levels = 4;
  p.image_id = image_content_id(img);
  p.feature_sets =
      extract_rr_features(img, 4, std::vector<Domain>{Domain::I, Domain::IGM});
  const std::string bytes = encode(p);

  std::size_t count = 0;
  for (const char* key : {"\"g\":", "\"r\":", "\"sigma\":", "\"kurt\":",
                          "\"skew\":", "\"entropy\":"}) {
    for (std::size_t pos = 0; (pos = bytes.find(key, pos)) != std::string::npos;
         pos += std::strlen(key))
      ++count;
  }
  EXPECT_EQ(count, 96u);
  EXPECT_LT(bytes.size(), 8u * 1024u);

  RRPayload single = p;
  single.feature_sets = extract_rr_features(img, 4, std::vector<Domain>{Domain::I});
  std::size_t single_count = 0;
  const std::string single_bytes = encode(single);
  for (const char* key : {"\"g\":", "\"r\":", "\"sigma\":", "\"kurt\":",
                          "\"skew\":", "\"entropy\":"}) {
    for (std::size_t pos = 0;
         (pos = single_bytes.find(key, pos)) != std::string::npos;
         pos += std::strlen(key))
      ++single_count;
  }
  EXPECT_EQ(single_count, 48u);
}

TEST(Codec, CanonicalFormStableAcrossLoadStore) {
  SplitMix64 rng(11);
  const RRPayload p = random_payload(rng);
  const std::string first = encode(p);
  const std::string second = encode(decode(first));
  EXPECT_EQ(first, second);
  EXPECT_EQ(first.find('\r'), std::string::npos);
  EXPECT_EQ(first.back(), '\n');
}

TEST(Codec, RejectsNonFinite) {
  RRPayload p;
  p.levels = 1;
  RRFeatureSet set;
  set.domain = Domain::I;
  set.levels = 1;
  set.features.resize(2);
  set.features[0].kurt = std::nan("");
  p.feature_sets = {set};
  EXPECT_THROW(encode(p), NumericalError);
  p.feature_sets[0].features[0].kurt = INFINITY;
  EXPECT_THROW(encode(p), NumericalError);
}

TEST(Codec, DecodeRejectsMalformedInput) {
  SplitMix64 rng(13);
  const std::string good = encode(random_payload(rng));

  EXPECT_THROW(decode(good.substr(0, good.size() / 2)), InputError);
  EXPECT_THROW(decode(""), InputError);
  EXPECT_THROW(decode("[1,2,3]"), InputError);
  try {
    decode(good.substr(0, good.size() / 2));
    FAIL();
  } catch (const InputError& e) {
    EXPECT_STREQ(e.what(), "parse error");
  }
}

TEST(Codec, DecodeRejectsUnknownVersion) {
  SplitMix64 rng(17);
  std::string bytes = encode(random_payload(rng));
  const std::string needle = "\"format_version\": 1";
  bytes.replace(bytes.find(needle), needle.size(), "\"format_version\": 2");
  try {
    decode(bytes);
    FAIL();
  } catch (const InputError& e) {
    EXPECT_STREQ(e.what(), "unsupported payload version");
  }
}

TEST(Codec, DecodeRejectsScalarCountMutations) {
  const GrayImage img = test::noise_texture(32, 32, 5);
  RRPayload p;
  p.levels = 4;
  p.image_id = image_content_id(img);
  p.feature_sets =
      extract_rr_features(img, 4, std::vector<Domain>{Domain::I, Domain::IGM});
  const std::string bytes = encode(p);

  // Drop one scalar (95 of 96): remove the first "skew" key-value pair.
  std::string mutated = bytes;
  const auto skew_pos = mutated.find("\"skew\": ");
  const auto value_end = mutated.find(", \"entropy\"", skew_pos);
  mutated.erase(skew_pos, value_end + 2 - skew_pos);
  try {
    decode(mutated);
    FAIL();
  } catch (const InputError& e) {
    EXPECT_STREQ(e.what(), "corrupt payload");
  }

  // Levels claim inconsistent with the feature array length.
  std::string short_levels = bytes;
  const std::string needle = "\"levels\": 4";
  short_levels.replace(short_levels.find(needle), needle.size(), "\"levels\": 3");
  EXPECT_THROW(decode(short_levels), InputError);

  // Orientation slot out of order.
  std::string swapped = bytes;
  const auto h_pos = swapped.find("\"orientation\": \"H\"");
  swapped.replace(h_pos, std::strlen("\"orientation\": \"H\""),
                  "\"orientation\": \"V\"");
  EXPECT_THROW(decode(swapped), InputError);
}

TEST(Codec, ImageContentId) {
  const GrayImage a = test::noise_texture(16, 16, 1, 0);
  const GrayImage b = test::noise_texture(16, 16, 2, 0);
  const std::string id_a = image_content_id(a);
  EXPECT_EQ(id_a, image_content_id(a));
  EXPECT_NE(id_a, image_content_id(b));
  EXPECT_EQ(id_a.rfind("fnv1a64:", 0), 0u);
  EXPECT_EQ(id_a.size(), 8u + 16u);
  // Shape participates in the hash.
  GrayImage wide(8, 32);
  GrayImage tall(32, 8);
  EXPECT_NE(image_content_id(wide), image_content_id(tall));
}

TEST(Codec, SaveLoadRoundTrip) {
  test::TempDir dir;
  SplitMix64 rng(19);
  const RRPayload p = random_payload(rng);
  const std::string path = dir.file("payload" + std::string(kPayloadExtension));
  save_payload(path, p);
  EXPECT_EQ(load_payload(path), p);
  EXPECT_TRUE(has_payload_extension(path));
  EXPECT_FALSE(has_payload_extension(dir.file("image.png")));
  EXPECT_THROW(load_payload(dir.file("missing.igstqa.json")), InputError);
}

}  // namespace
}  // namespace igstqa
