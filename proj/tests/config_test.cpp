/*
 * Copyright 2026 The DQI Workbench Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <gtest/gtest.h>

#include <filesystem>

#include "dqi/config.hpp"
#include "dqi/corpus.hpp"
#include "support.hpp"

namespace dqi {
namespace {

using testing::code_of;

TEST(Config, DefaultsCarryPaperBands) {
  const auto& c = default_config();
  EXPECT_EQ(c.params.length_lower, 3);
  EXPECT_EQ(c.params.length_upper, 30);
  EXPECT_DOUBLE_EQ(c.params.min_similarity, 0.4);
  EXPECT_EQ(c.bands.reference_size, 40);
  const auto& overlap = c.bands.at(kOverlapRatioKey);
  EXPECT_EQ(overlap.orientation, Orientation::kHighGreen);
  EXPECT_DOUBLE_EQ(overlap.green.lo, 17.1944);
  EXPECT_DOUBLE_EQ(overlap.yellow.lo, 5.5347);
  EXPECT_EQ(overlap.green.hi, kInf);
  const auto& ws = c.bands.at(kWordSimilarityKey);
  EXPECT_EQ(ws.orientation, Orientation::kLowGreen);
  EXPECT_DOUBLE_EQ(ws.green.hi, 5.2483);
  EXPECT_DOUBLE_EQ(ws.yellow.hi, 6.8188);
  for (const auto comp : kAllComponents) EXPECT_TRUE(c.bands.contains(to_string(comp)));
  EXPECT_EQ(c.params, HyperParams{});
}

TEST(Config, OverridesOnTopOfBase) {
  const auto c = parse_config(
      "# comment\n"
      "a = 4\n"
      "SIM = 0.3\n"
      "[nouns]\n"
      "c = 2\n"
      "d = 9\n"
      "[aggregate]\n"
      "c2 = 0.5\n"
      "[band:c1]\n"
      "orientation = center_green\n"
      "green_lo = -1\n"
      "green_hi = 1\n"
      "yellow_lo = -2\n"
      "yellow_hi = 2\n");
  EXPECT_EQ(c.params.length_lower, 4);
  EXPECT_DOUBLE_EQ(c.params.min_similarity, 0.3);
  EXPECT_EQ(c.params.bounds(Granularity::kNouns), (FrequencyBounds{2, 9}));
  EXPECT_DOUBLE_EQ(c.params.aggregate_weights.at(Component::kC2), 0.5);
  EXPECT_EQ(c.bands.at("c1").green, (Interval{-1, 1}));
  EXPECT_EQ(c.bands.at("c2"), default_config().bands.at("c2"));
}

TEST(Config, RejectsUnknownOrInvalid) {
  EXPECT_EQ(code_of([] { parse_config("bogus = 1\n"); }), ErrorCode::kBadConfig);
  EXPECT_EQ(code_of([] { parse_config("[mystery]\nc = 1\n"); }), ErrorCode::kBadConfig);
  EXPECT_EQ(code_of([] { parse_config("a = three\n"); }), ErrorCode::kBadConfig);
  EXPECT_EQ(code_of([] { parse_config("[band:x]\norientation = sideways\n"); }),
            ErrorCode::kBadConfig);
  EXPECT_EQ(code_of([] {
              parse_config("[band:x]\norientation = center_green\ngreen_lo = 0\ngreen_hi = 5\n"
                           "yellow_lo = 1\nyellow_hi = 4\n");
            }),
            ErrorCode::kBadConfig);
  EXPECT_THROW(parse_config("a = 40\n"), Error);
  EXPECT_EQ(code_of([] { load_config("/nope/missing.conf"); }), ErrorCode::kIoError);
}

TEST(Config, SerializeRoundTrip) {
  auto c = default_config();
  c.params.top_fraction = 0.25;
  c.bands.bands["c3"] = make_band(Orientation::kCenterGreen, {0.1, 0.30000000000000004},
                                  {-1, 2});
  const auto text = serialize_config(c);
  const auto back = parse_config(text);
  EXPECT_EQ(back, c);
  EXPECT_EQ(serialize_config(back), text);
  const auto path = std::filesystem::temp_directory_path() / "dqi_config_roundtrip.conf";
  save_config(path, c);
  EXPECT_EQ(load_config(path), c);
  std::filesystem::remove(path);
}

TEST(Config, FormatNumberShortest) {
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(3), "3");
  EXPECT_EQ(format_number(kInf), "inf");
  EXPECT_EQ(format_number(-kInf), "-inf");
  EXPECT_EQ(std::stod(format_number(1.0 / 3.0)), 1.0 / 3.0);
}

}  // namespace
}  // namespace dqi
