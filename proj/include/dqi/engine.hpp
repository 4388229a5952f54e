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

#ifndef DQI_ENGINE_HPP_
#define DQI_ENGINE_HPP_

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dqi/corpus.hpp"
#include "dqi/textprims.hpp"

namespace dqi {

enum class Component { kC1 = 0, kC2, kC3, kC4, kC5, kC6, kC7 };
inline constexpr std::array<Component, 7> kAllComponents = {
    Component::kC1, Component::kC2, Component::kC3, Component::kC4,
    Component::kC5, Component::kC6, Component::kC7};

std::string_view to_string(Component component);
std::optional<Component> parse_component(std::string_view text);

/// Unit classes over which frequency statistics are taken.
enum class Granularity {
  kWords,
  kAdjectives,
  kAdverbs,
  kVerbs,
  kNouns,
  kBigrams,
  kTrigrams,
  kSentences
};
inline constexpr std::array<Granularity, 8> kAllGranularities = {
    Granularity::kWords,   Granularity::kAdjectives, Granularity::kAdverbs,
    Granularity::kVerbs,   Granularity::kNouns,      Granularity::kBigrams,
    Granularity::kTrigrams, Granularity::kSentences};

std::string_view to_string(Granularity granularity);
std::optional<Granularity> parse_granularity(std::string_view text);
/// Sentence, bigram and trigram terms are gated by min_granularity_mass.
bool is_mass_gated(Granularity granularity);
bool is_pos_granularity(Granularity granularity);

/// Units of one sample (premise then hypothesis) at a granularity: content
/// words, POS-filtered content words, n-grams over all tokens, or the
/// space-joined sentences.
std::vector<std::string> sample_units(const Sample& sample, Granularity granularity);

struct FrequencyBounds {
  int lower = 1;  // c
  int upper = 50; // d

  bool operator==(const FrequencyBounds&) const = default;
};

/// Every threshold the component formulas use.
struct HyperParams {
  int length_lower = 3;   // a
  int length_upper = 30;  // b
  std::map<Granularity, FrequencyBounds> frequency_bounds = default_bounds();
  double min_similarity = 0.4;          // SIM
  double top_fraction = 0.5;            // e
  double target_word_similarity = 0.5;  // WSIM
  double target_pair_similarity = 0.5;  // ISIM
  int label_frequency_cap = 50;         // g
  double split_overlap = 0.4;           // SSIM
  double sigma_epsilon = 1e-12;
  long min_granularity_mass = 0;
  double overlap_floor = 0.1;
  std::map<Component, double> aggregate_weights = default_weights();

  static std::map<Granularity, FrequencyBounds> default_bounds();
  static std::map<Component, double> default_weights();

  /// Throws kInvalidParams when an invariant is violated.
  void validate() const;
  FrequencyBounds bounds(Granularity g) const;

  bool operator==(const HyperParams&) const = default;
};

struct GranularityTerms {
  double t1 = 0.0;
  double t2 = 0.0;
  double sigma = 0.0;  // of the normalized frequencies
  std::size_t units = 0;
  long mass = 0;

  double contribution() const { return t1 * t2; }
};

/// Premise/hypothesis detail of one sample, kept for the c5 views.
struct PairDetail {
  std::string id;
  double similarity = 0.0;  // Sim_ph
  int premise_length = 0;
  int hypothesis_length = 0;
  int premise_content = 0;
  int hypothesis_content = 0;
  int overlap_count = 0;
  double overlap_ratio = 0.0;  // (content lengths) / max(overlap, floor)
  double word_similarity_sum = 0.0;
};

/// Most similar train sample for one test sample.
struct TrainMatch {
  std::string test_id;
  std::string train_id;
  double similarity = 0.0;
};

struct ComponentReport {
  Component component = Component::kC1;
  double value = 0.0;
  /// Scalar terms, e.g. "T1", "entailment.T3", "T5.words".
  std::map<std::string, double> terms;
  /// Per-granularity terms, keyed "words" (c2) or "entailment.words" (c6).
  std::map<std::string, GranularityTerms> granularities;
  /// Granularity key -> reason; skipped granularities contribute zero.
  std::map<std::string, std::string> skipped;
  std::vector<std::string> warnings;
  std::vector<PairDetail> pairs;      // c5
  std::vector<TrainMatch> matches;    // c7

  double term(std::string_view key) const;
};

/// Recombines a report's terms the way its component defines the value.
double recompute_value(const ComponentReport& report);

struct DqiReport {
  std::map<Component, ComponentReport> components;
  double aggregate = 0.0;
  std::string stopword_version;
  std::string tagger_version;

  const ComponentReport& at(Component c) const { return components.at(c); }
  double value(Component c) const { return components.at(c).value; }
};

ComponentReport compute_c1(const Dataset& dataset, const HyperParams& params);
ComponentReport compute_c2(const Dataset& dataset, const HyperParams& params);
ComponentReport compute_c3(const Dataset& dataset,
                           const SimilarityProvider& provider,
                           const HyperParams& params);
ComponentReport compute_c4(const Dataset& dataset,
                           const SimilarityProvider& provider,
                           const HyperParams& params);
ComponentReport compute_c5(const Dataset& dataset,
                           const SimilarityProvider& provider,
                           const HyperParams& params);
ComponentReport compute_c6(const Dataset& dataset, const HyperParams& params);
ComponentReport compute_c7(const Dataset& dataset,
                           const SimilarityProvider& provider,
                           const HyperParams& params);

/// All seven components plus the weighted-sum aggregate. A dataset without
/// both train and test samples gets c7 = 0 with the reason in `skipped`.
DqiReport compute_all(const Dataset& dataset, const SimilarityProvider& provider,
                      const HyperParams& params);

double aggregate(const std::map<Component, double>& values,
                 const HyperParams& params);

/// DQI of a lone sample with the cold-start overrides applied.
DqiReport cold_start(const Sample& sample, const SimilarityProvider& provider,
                     const HyperParams& params);

struct ImpactReport {
  DqiReport before;  // x1
  DqiReport after;   // x2
  std::map<Component, double> x1;
  std::map<Component, double> x2;
  std::map<Component, double> delta;  // x1 - x2

  /// before.term - after.term for a scalar term ("T1") of one component.
  double term_delta(Component component, std::string_view term) const;
};

ImpactReport impact(const Dataset& dataset, const Sample& sample,
                    const SimilarityProvider& provider,
                    const HyperParams& params);

}  // namespace dqi

#endif  // DQI_ENGINE_HPP_
