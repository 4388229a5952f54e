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

#include <algorithm>
#include <random>

#include "dqi/engine.hpp"
#include "dqi/report.hpp"
#include "support.hpp"

namespace dqi {
namespace {

using testing::code_of;
using testing::make_sample;

const SimilarityProvider& lexical() {
  static const auto p = SimilarityProvider::lexical();
  return p;
}

Sample s1() {
  return make_sample("S1", "A woman, in a green shirt, preparing to run on a treadmill.",
                     "A woman is preparing to sleep on a treadmill.", Label::kContradiction,
                     Split::kTrain);
}

TEST(Anchors, ColdStartC1) {
  const auto r = cold_start(s1(), lexical(), HyperParams{});
  const auto& c1 = r.at(Component::kC1);
  EXPECT_DOUBLE_EQ(c1.term("T1"), 7.0);
  EXPECT_NEAR(c1.term("T2"), 2.1213, 0.001);
  EXPECT_DOUBLE_EQ(c1.term("T3"), 1.0);
}

TEST(Anchors, WordFrequencyT1) {
  // Content words of S1: woman, preparing, treadmill twice; green, shirt, run, sleep once.
  const auto c2 = compute_c2(Dataset({s1()}), HyperParams{});
  const auto& words = c2.granularities.at("words");
  EXPECT_EQ(words.units, 7u);
  EXPECT_EQ(words.mass, 10);
  EXPECT_NEAR(words.t1, 13.0958, 0.01);
  EXPECT_TRUE(c2.skipped.count("adjectives"));
}

TEST(Anchors, OverlapRatioWithoutOverlap) {
  const auto s9 = make_sample("S9", "Two dogs chase a ball.", "Cats sleep indoors.",
                              Label::kContradiction);
  const auto c5 = compute_c5(Dataset({s9}), lexical(), HyperParams{});
  ASSERT_EQ(c5.pairs.size(), 1u);
  EXPECT_EQ(c5.pairs[0].premise_content + c5.pairs[0].hypothesis_content, 7);
  EXPECT_EQ(c5.pairs[0].overlap_count, 0);
  EXPECT_DOUBLE_EQ(c5.pairs[0].overlap_ratio, 70.0);
}

TEST(Engine, MatchesOracleOnRandomCorpora) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const auto d = testing::random_corpus(seed);
    const HyperParams params;
    const auto report = compute_all(d, lexical(), params);
    const auto flat = flatten(report);
    const auto want = testing::oracle::evaluate(d, params);
    for (const auto& [key, value] : want) {
      if (key == "aggregate") {
        EXPECT_TRUE(testing::close(report.aggregate, value)) << seed;
        continue;
      }
      const auto it = flat.find(key);
      ASSERT_NE(it, flat.end()) << "seed " << seed << " missing " << key;
      EXPECT_TRUE(testing::close(it->second, value))
          << "seed " << seed << " " << key << ": " << it->second << " vs " << value;
    }
    for (const auto& [key, value] : flat)
      EXPECT_TRUE(want.count(key)) << "seed " << seed << " unexpected " << key;
  }
}

TEST(Engine, MatchesOracleWithMassGate) {
  HyperParams params;
  params.min_granularity_mass = 25;
  params.top_fraction = 0.2;
  for (std::uint64_t seed = 100; seed <= 110; ++seed) {
    const auto d = testing::random_corpus(seed);
    const auto flat = flatten(compute_all(d, lexical(), params));
    for (const auto& [key, value] : testing::oracle::evaluate(d, params)) {
      if (key == "aggregate") continue;
      ASSERT_TRUE(flat.count(key)) << key;
      EXPECT_TRUE(testing::close(flat.at(key), value)) << key;
    }
  }
}

TEST(Engine, ValuesRecomputeFromTerms) {
  const auto report = compute_all(testing::fixture(), lexical(), HyperParams{});
  for (const auto& [c, r] : report.components)
    EXPECT_DOUBLE_EQ(r.value, recompute_value(r)) << to_string(c);
  std::map<Component, double> values;
  for (const auto c : kAllComponents) values[c] = report.value(c);
  EXPECT_DOUBLE_EQ(report.aggregate, aggregate(values, HyperParams{}));
}

TEST(Engine, PermutationInvariant) {
  const auto d = testing::fixture();
  std::vector<Sample> shuffled(d.samples().begin(), d.samples().end());
  std::mt19937_64 rng(7);
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  const auto a = flatten(compute_all(d, lexical(), HyperParams{}));
  const auto b = flatten(compute_all(Dataset(shuffled), lexical(), HyperParams{}));
  ASSERT_EQ(a.size(), b.size());
  for (const auto& [k, v] : a) EXPECT_TRUE(testing::close(v, b.at(k), 1e-12)) << k;
}

TEST(Engine, Deterministic) {
  const auto d = testing::fixture();
  EXPECT_EQ(flatten(compute_all(d, lexical(), HyperParams{})),
            flatten(compute_all(d, lexical(), HyperParams{})));
}

TEST(Engine, WeightsScaleAggregate) {
  HyperParams params;
  params.aggregate_weights[Component::kC2] = 0.0;
  params.aggregate_weights[Component::kC6] = 2.0;
  const auto r = compute_all(testing::fixture(), lexical(), params);
  double want = 0;
  for (const auto c : kAllComponents) want += params.aggregate_weights.at(c) * r.value(c);
  EXPECT_NEAR(r.aggregate, want, 1e-9);
}

TEST(Engine, ErrorsOnDegenerateInput) {
  const Dataset empty;
  EXPECT_EQ(code_of([&] { compute_all(empty, lexical(), HyperParams{}); }),
            ErrorCode::kEmptyDataset);
  EXPECT_EQ(code_of([&] { compute_c1(empty, HyperParams{}); }), ErrorCode::kEmptyDataset);
  EXPECT_EQ(code_of([&] { compute_c3(empty, lexical(), HyperParams{}); }),
            ErrorCode::kTooFewSentences);
  const Dataset unsplit({make_sample("a", "A dog runs.", "A cat sits.")});
  EXPECT_EQ(code_of([&] { compute_c7(unsplit, lexical(), HyperParams{}); }),
            ErrorCode::kMissingSplit);
  const auto all = compute_all(unsplit, lexical(), HyperParams{});
  EXPECT_EQ(all.value(Component::kC7), 0.0);
  EXPECT_TRUE(all.at(Component::kC7).skipped.count("T1"));
}

TEST(Engine, MissingLabelWarns) {
  const Dataset d({make_sample("a", "A dog runs fast.", "A dog moves.", Label::kEntailment),
                   make_sample("b", "A cat sits.", "A cat naps.", Label::kEntailment)});
  const auto c6 = compute_c6(d, HyperParams{});
  EXPECT_TRUE(c6.skipped.count("neutral"));
  EXPECT_TRUE(c6.skipped.count("contradiction"));
  ASSERT_EQ(c6.warnings.size(), 2u);
  EXPECT_NE(c6.warnings[0].find("MissingLabel(neutral)"), std::string::npos);
  EXPECT_TRUE(c6.terms.count("entailment.T3"));
}

TEST(Engine, SingleUnitGranularitySkipped) {
  // One sentence pair gives two sentence units; identical sentences give one.
  const Dataset d({make_sample("a", "A dog runs.", "A dog runs.")});
  const auto c2 = compute_c2(d, HyperParams{});
  EXPECT_TRUE(c2.skipped.count("sentences"));
  EXPECT_FALSE(c2.granularities.count("sentences"));
}

TEST(Engine, TermLookupThrowsOnUnknownKey) {
  const auto c1 = compute_c1(testing::fixture(), HyperParams{});
  EXPECT_EQ(code_of([&] { c1.term("T9"); }), ErrorCode::kInvalidParams);
}

TEST(Engine, InvalidParamsRejected) {
  HyperParams p;
  p.length_lower = 40;
  EXPECT_EQ(code_of([&] { p.validate(); }), ErrorCode::kInvalidParams);
  HyperParams q;
  q.top_fraction = 1.5;
  EXPECT_EQ(code_of([&] { q.validate(); }), ErrorCode::kInvalidParams);
  EXPECT_NO_THROW(HyperParams{}.validate());
}

TEST(Engine, NamesRoundTrip) {
  for (const auto c : kAllComponents) EXPECT_EQ(parse_component(to_string(c)), c);
  for (const auto g : kAllGranularities) EXPECT_EQ(parse_granularity(to_string(g)), g);
  EXPECT_FALSE(parse_component("c8"));
  EXPECT_TRUE(is_mass_gated(Granularity::kTrigrams));
  EXPECT_FALSE(is_mass_gated(Granularity::kWords));
  EXPECT_TRUE(is_pos_granularity(Granularity::kNouns));
}

TEST(ColdStart, Overrides) {
  const auto r = cold_start(s1(), lexical(), HyperParams{});
  EXPECT_DOUBLE_EQ(r.at(Component::kC3).term("T2"), 2.0);
  EXPECT_DOUBLE_EQ(r.at(Component::kC5).term("T3"), 0.0);
  EXPECT_DOUBLE_EQ(r.value(Component::kC7), 0.0);
  for (const auto g : kAllGranularities)
    EXPECT_DOUBLE_EQ(r.at(Component::kC6).term("T5." + std::string(to_string(g))), 0.0);
  EXPECT_TRUE(r.at(Component::kC6).skipped.count("entailment"));
  EXPECT_TRUE(r.at(Component::kC6).terms.count("contradiction.T3"));
  EXPECT_DOUBLE_EQ(r.at(Component::kC5).term("T4"), r.at(Component::kC5).pairs[0].similarity);
}

TEST(Impact, DeltaAlgebraAndPurity) {
  const auto d = testing::fixture();
  const auto draft = make_sample("draft", "A man is cooking dinner.", "A man cooks food.",
                                 Label::kEntailment, Split::kTrain);
  const auto before_gen = d.generation();
  const auto r = impact(d, draft, lexical(), HyperParams{});
  EXPECT_EQ(d.generation(), before_gen);
  EXPECT_EQ(d.size(), 40u);
  for (const auto c : kAllComponents) EXPECT_EQ(r.delta.at(c), r.x1.at(c) - r.x2.at(c));
  EXPECT_EQ(r.term_delta(Component::kC1, "T1"),
            r.before.at(Component::kC1).term("T1") - r.after.at(Component::kC1).term("T1"));
  const auto undone = undo_trial(add_trial_sample(d, draft));
  const auto again = compute_all(undone, lexical(), HyperParams{});
  for (const auto c : kAllComponents) EXPECT_EQ(again.value(c), r.x1.at(c));
  EXPECT_EQ(code_of([&] { impact(Dataset(), draft, lexical(), HyperParams{}); }),
            ErrorCode::kEmptyDataset);
}

TEST(Impact, DuplicateSampleRaisesVocabularyDelta) {
  const auto d = testing::fixture();
  for (const auto& s : d.samples()) {
    auto dup = s;
    dup.id = s.id + "-dup";
    EXPECT_GT(impact(d, dup, lexical(), HyperParams{}).term_delta(Component::kC1, "T1"), 0.0)
        << s.id;
  }
}

}  // namespace
}  // namespace dqi
