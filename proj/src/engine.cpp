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

#include "dqi/engine.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "dqi/error.hpp"
#include "dqi/stats.hpp"

namespace dqi {

namespace {

constexpr Eigen::Index kBlockRows = 256;

struct SampleText {
  const Sample* sample = nullptr;
  TokenSeq premise;
  TokenSeq hypothesis;
  TokenSeq premise_content;
  TokenSeq hypothesis_content;
};

struct Features {
  std::vector<SampleText> samples;
  CorpusStats stats;
};

Features extract(const Dataset& dataset) {
  Features f;
  f.samples.reserve(dataset.size());
  std::vector<TokenSeq> sentences;
  sentences.reserve(dataset.sentence_count());
  for (const auto& s : dataset.samples()) {
    SampleText t;
    t.sample = &s;
    t.premise = tokenize(s.premise);
    t.hypothesis = tokenize(s.hypothesis);
    t.premise_content = content_tokens(t.premise);
    t.hypothesis_content = content_tokens(t.hypothesis);
    sentences.push_back(t.premise);
    sentences.push_back(t.hypothesis);
    f.samples.push_back(std::move(t));
  }
  f.stats = CorpusStats(sentences);
  return f;
}

PosTag pos_of(Granularity g) {
  switch (g) {
    case Granularity::kAdjectives: return PosTag::kAdjective;
    case Granularity::kAdverbs: return PosTag::kAdverb;
    case Granularity::kVerbs: return PosTag::kVerb;
    case Granularity::kNouns: return PosTag::kNoun;
    default: return PosTag::kOther;
  }
}

void append_units(const TokenSeq& tokens, const TokenSeq& content,
                  Granularity g, std::vector<std::string>& out) {
  switch (g) {
    case Granularity::kWords:
      out.insert(out.end(), content.begin(), content.end());
      return;
    case Granularity::kAdjectives:
    case Granularity::kAdverbs:
    case Granularity::kVerbs:
    case Granularity::kNouns: {
      const PosTag want = pos_of(g);
      for (const auto& t : content)
        if (tag_word(t) == want) out.push_back(t);
      return;
    }
    case Granularity::kBigrams: {
      auto grams = ngrams(tokens, 2);
      out.insert(out.end(), grams.begin(), grams.end());
      return;
    }
    case Granularity::kTrigrams: {
      auto grams = ngrams(tokens, 3);
      out.insert(out.end(), grams.begin(), grams.end());
      return;
    }
    case Granularity::kSentences:
      if (!tokens.empty()) out.push_back(join(tokens));
      return;
  }
}

std::vector<std::string> sample_units(const SampleText& t, Granularity g) {
  std::vector<std::string> out;
  append_units(t.premise, t.premise_content, g, out);
  append_units(t.hypothesis, t.hypothesis_content, g, out);
  return out;
}

using FrequencyTable = std::map<std::string, long>;

template <typename Keep>
FrequencyTable count_units(const Features& f, Granularity g, Keep keep) {
  FrequencyTable table;
  for (const auto& t : f.samples)
    if (keep(t))
      for (auto& u : sample_units(t, g)) ++table[std::move(u)];
  return table;
}

struct FrequencyOutcome {
  std::optional<GranularityTerms> terms;
  std::string skip_reason;
};

// 1/sigma of the unit frequencies normalized by unit count, times the mean
// band sign of the raw frequencies against [lower, upper].
FrequencyOutcome frequency_terms(const FrequencyTable& table, Granularity g,
                                 double lower, double upper,
                                 const HyperParams& params) {
  FrequencyOutcome out;
  if (table.empty()) {
    out.skip_reason = "no units";
    return out;
  }
  long mass = 0;
  for (const auto& [u, v] : table) mass += v;
  if (is_mass_gated(g) && mass < params.min_granularity_mass) {
    out.skip_reason = "mass " + std::to_string(mass) + " below threshold " +
                      std::to_string(params.min_granularity_mass);
    return out;
  }
  const auto units = static_cast<Eigen::Index>(table.size());
  Eigen::VectorXd normalized(units);
  double sign_sum = 0.0;
  Eigen::Index k = 0;
  for (const auto& [u, v] : table) {
    normalized(k++) = static_cast<double>(v) / static_cast<double>(units);
    sign_sum += band_sign(static_cast<double>(v), lower, upper);
  }
  const double sigma = sample_stddev(normalized);
  if (units < 2 || sigma < params.sigma_epsilon) {
    out.skip_reason = "zero variance";
    return out;
  }
  GranularityTerms terms;
  terms.t1 = 1.0 / sigma;
  terms.t2 = sign_sum / static_cast<double>(units);
  terms.sigma = sigma;
  terms.units = table.size();
  terms.mass = mass;
  out.terms = terms;
  return out;
}

void require_samples(const Features& f) {
  if (f.samples.empty()) throw Error(ErrorCode::kEmptyDataset, "dataset has no samples");
}

ComponentReport c1_from(const Features& f, const HyperParams& params) {
  require_samples(f);
  ComponentReport r;
  r.component = Component::kC1;
  std::set<std::string_view> vocabulary;
  std::vector<double> lengths;
  lengths.reserve(2 * f.samples.size());
  double sign_sum = 0.0;
  for (const auto& t : f.samples) {
    vocabulary.insert(t.premise_content.begin(), t.premise_content.end());
    vocabulary.insert(t.hypothesis_content.begin(), t.hypothesis_content.end());
    for (const auto* s : {&t.premise, &t.hypothesis}) {
      const auto len = static_cast<double>(s->size());
      lengths.push_back(len);
      sign_sum += band_sign(len, static_cast<double>(params.length_lower),
                            static_cast<double>(params.length_upper));
    }
  }
  r.terms["T1"] = static_cast<double>(vocabulary.size()) /
                  static_cast<double>(f.samples.size());
  r.terms["T2"] = sample_stddev(lengths);
  r.terms["T3"] = sign_sum / static_cast<double>(lengths.size());
  r.value = recompute_value(r);
  return r;
}

ComponentReport c2_from(const Features& f, const HyperParams& params) {
  require_samples(f);
  ComponentReport r;
  r.component = Component::kC2;
  for (const auto g : kAllGranularities) {
    const auto table = count_units(f, g, [](const SampleText&) { return true; });
    const auto b = params.bounds(g);
    auto outcome = frequency_terms(table, g, b.lower, b.upper, params);
    const std::string key(to_string(g));
    if (outcome.terms)
      r.granularities[key] = *outcome.terms;
    else
      r.skipped[key] = outcome.skip_reason;
  }
  r.value = recompute_value(r);
  return r;
}

std::vector<TokenSeq> all_sentences(const Features& f) {
  std::vector<TokenSeq> out;
  out.reserve(2 * f.samples.size());
  for (const auto& t : f.samples) {
    out.push_back(t.premise);
    out.push_back(t.hypothesis);
  }
  return out;
}

std::size_t top_count(double fraction, std::size_t others) {
  // Guard against e * (n - 1) landing a hair above an integer.
  const double raw = fraction * static_cast<double>(others);
  auto k = static_cast<std::size_t>(std::ceil(raw - 1e-9));
  return std::clamp<std::size_t>(k, others > 0 ? 1 : 0, others);
}

ComponentReport c3_from(const Features& f, const HyperParams& params) {
  const auto sentences = all_sentences(f);
  if (sentences.size() < 2)
    throw Error(ErrorCode::kTooFewSentences, "need at least two sentences");
  ComponentReport r;
  r.component = Component::kC3;
  const SentenceIndex index(sentences, f.stats);
  const Eigen::Index n = index.size();
  const std::size_t k = top_count(params.top_fraction, static_cast<std::size_t>(n - 1));
  Eigen::VectorXd below(n);
  double penalty_sum = 0.0;
  std::vector<double> penalties;
  for (Eigen::Index first = 0; first < n; first += kBlockRows) {
    const Eigen::Index count = std::min(kBlockRows, n - first);
    const Eigen::MatrixXd sim = index.block(first, count);
    for (Eigen::Index i = 0; i < count; ++i) {
      const Eigen::Index l = first + i;
      penalties.clear();
      long failing = 0;
      for (Eigen::Index m = 0; m < n; ++m) {
        if (m == l) continue;
        const double s = sim(i, m);
        if (s < params.min_similarity) ++failing;
        const double d = s - params.min_similarity;
        penalties.push_back(std::abs(d) - d);
      }
      below(l) = static_cast<double>(failing);
      std::partial_sort(penalties.begin(), penalties.begin() + static_cast<std::ptrdiff_t>(k),
                        penalties.end(), std::greater<>());
      for (std::size_t j = 0; j < k; ++j) penalty_sum += penalties[j];
    }
  }
  const auto size_s = static_cast<double>(n);
  r.terms["T1"] = size_s / (sample_stddev(below) + 1.0);
  r.terms["T2"] = 2.0 * size_s / (penalty_sum + 1.0);
  r.value = recompute_value(r);
  return r;
}

ComponentReport c4_from(const Features& f, const SimilarityProvider& provider,
                        const HyperParams& params) {
  require_samples(f);
  ComponentReport r;
  r.component = Component::kC4;
  double deviation = 0.0;
  for (const auto& t : f.samples) {
    for (const auto* words : {&t.premise_content, &t.hypothesis_content}) {
      const std::size_t len = words->size();
      if (len < 2) continue;
      Eigen::MatrixXd w(static_cast<Eigen::Index>(len), static_cast<Eigen::Index>(len));
      for (std::size_t i = 0; i < len; ++i) {
        w(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = 0.0;
        for (std::size_t j = i + 1; j < len; ++j) {
          const double s = provider.word_similarity((*words)[i], (*words)[j]);
          w(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = s;
          w(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = s;
        }
      }
      const Eigen::VectorXd means = w.rowwise().sum() / static_cast<double>(len - 1);
      deviation += (means.array() - params.target_word_similarity).abs().sum();
    }
  }
  r.terms["T1"] = static_cast<double>(2 * f.samples.size()) / (deviation + 1.0);
  r.value = recompute_value(r);
  return r;
}

std::set<std::string_view> unique_words(const TokenSeq& tokens) {
  return {tokens.begin(), tokens.end()};
}

PairDetail pair_detail(const SampleText& t, const SimilarityProvider& provider,
                       const CorpusStats& stats, const HyperParams& params) {
  PairDetail d;
  d.id = t.sample->id;
  d.similarity = provider.sentence_similarity(t.premise, t.hypothesis, stats);
  d.premise_length = static_cast<int>(t.premise.size());
  d.hypothesis_length = static_cast<int>(t.hypothesis.size());
  d.premise_content = static_cast<int>(t.premise_content.size());
  d.hypothesis_content = static_cast<int>(t.hypothesis_content.size());
  const auto pw = unique_words(t.premise_content);
  const auto hw = unique_words(t.hypothesis_content);
  for (auto w : hw) d.overlap_count += static_cast<int>(pw.count(w));
  d.overlap_ratio = static_cast<double>(d.premise_content + d.hypothesis_content) /
                    std::max(static_cast<double>(d.overlap_count), params.overlap_floor);
  for (auto h : hw) {
    double best = 0.0;
    for (auto p : pw) best = std::max(best, provider.word_similarity(h, p));
    d.word_similarity_sum += best;
  }
  return d;
}

ComponentReport c5_from(const Features& f, const SimilarityProvider& provider,
                        const HyperParams& params) {
  require_samples(f);
  ComponentReport r;
  r.component = Component::kC5;
  const auto n = static_cast<Eigen::Index>(f.samples.size());
  Eigen::VectorXd sims(n), gaps(n), ratios(n), inverse_sims(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    auto d = pair_detail(f.samples[static_cast<std::size_t>(i)], provider, f.stats, params);
    sims(i) = d.similarity;
    gaps(i) = std::abs(d.premise_length - d.hypothesis_length);
    ratios(i) = d.overlap_ratio;
    inverse_sims(i) = 1.0 / std::max(d.word_similarity_sum, params.overlap_floor);
    r.pairs.push_back(std::move(d));
  }
  const auto size_x = static_cast<double>(n);
  r.terms["T1"] = size_x / ((sims.array() - params.target_pair_similarity).abs().sum() + 1.0);
  r.terms["T2"] = size_x / (gaps.sum() + 1.0);
  r.terms["T3"] = sample_stddev(gaps) / size_x;
  r.terms["T4"] = sample_stddev(sims) / size_x;
  r.terms["T5"] = ratios.mean();
  r.terms["T6"] = inverse_sims.mean();
  r.value = recompute_value(r);
  return r;
}

ComponentReport c6_from(const Features& f, const HyperParams& params,
                        std::optional<Label> only_label = std::nullopt) {
  require_samples(f);
  ComponentReport r;
  r.component = Component::kC6;
  const double cap = params.label_frequency_cap;
  for (const auto label : kAllLabels) {
    const std::string lname(to_string(label));
    if (only_label && *only_label != label) {
      r.skipped[lname] = "cold start: label not present";
      continue;
    }
    std::vector<const SampleText*> members;
    for (const auto& t : f.samples)
      if (t.sample->label == label) members.push_back(&t);
    if (members.empty()) {
      r.warnings.push_back("MissingLabel(" + lname + "): no samples, contributes zero");
      r.skipped[lname] = "no samples";
      continue;
    }
    for (const auto g : kAllGranularities) {
      const auto table = count_units(
          f, g, [label](const SampleText& t) { return t.sample->label == label; });
      auto outcome = frequency_terms(table, g, 0.0, cap, params);
      const std::string key = lname + "." + std::string(to_string(g));
      if (outcome.terms)
        r.granularities[key] = *outcome.terms;
      else
        r.skipped[key] = outcome.skip_reason;
    }
    const auto n = static_cast<Eigen::Index>(members.size());
    Eigen::VectorXd gaps(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto* t = members[static_cast<std::size_t>(i)];
      gaps(i) = std::abs(static_cast<double>(t->premise.size()) -
                         static_cast<double>(t->hypothesis.size()));
    }
    r.terms[lname + ".T3"] = static_cast<double>(n) / (gaps.sum() + 1.0);
    r.terms[lname + ".T4"] = sample_stddev(gaps) / static_cast<double>(n);
  }
  for (const auto g : kAllGranularities) {
    const std::string key = "T5." + std::string(to_string(g));
    if (only_label) {
      r.terms[key] = 0.0;
      continue;
    }
    std::map<std::string, std::array<long, kNumLabels>> per_label;
    long mass = 0;
    for (const auto& t : f.samples) {
      const auto li = static_cast<std::size_t>(t.sample->label);
      for (auto& u : sample_units(t, g)) {
        ++per_label[std::move(u)][li];
        ++mass;
      }
    }
    if (per_label.empty()) {
      r.skipped[key] = "no units";
      continue;
    }
    if (is_mass_gated(g) && mass < params.min_granularity_mass) {
      r.skipped[key] = "mass " + std::to_string(mass) + " below threshold " +
                       std::to_string(params.min_granularity_mass);
      continue;
    }
    double spread = 0.0;
    for (const auto& [unit, counts] : per_label) {
      long total = 0;
      Eigen::Vector3d excess;
      for (std::size_t li = 0; li < kNumLabels; ++li) {
        total += counts[li];
        excess(static_cast<Eigen::Index>(li)) =
            static_cast<double>(std::max(counts[li] - 1, 0L));
      }
      if (total < 2) continue;  // units seen once are not considered
      spread += sample_stddev(excess);
    }
    r.terms[key] = static_cast<double>(per_label.size()) / (spread + 1.0);
  }
  r.value = recompute_value(r);
  return r;
}

TokenSeq sample_tokens(const SampleText& t) {
  TokenSeq out = t.premise;
  out.insert(out.end(), t.hypothesis.begin(), t.hypothesis.end());
  return out;
}

ComponentReport c7_from(const Features& f, const HyperParams& params) {
  std::vector<const SampleText*> train, test;
  for (const auto& t : f.samples) {
    if (t.sample->split == Split::kTrain) train.push_back(&t);
    if (t.sample->split == Split::kTest) test.push_back(&t);
  }
  if (train.empty() || test.empty())
    throw Error(ErrorCode::kMissingSplit,
                "need at least one train and one test sample (have " +
                    std::to_string(train.size()) + " train, " +
                    std::to_string(test.size()) + " test)");
  ComponentReport r;
  r.component = Component::kC7;
  std::vector<TokenSeq> train_tokens;
  for (const auto* t : train) train_tokens.push_back(sample_tokens(*t));
  const SentenceIndex index(train_tokens, f.stats);
  double deviation = 0.0;
  for (std::size_t first = 0; first < test.size(); first += kBlockRows) {
    const std::size_t count = std::min<std::size_t>(kBlockRows, test.size() - first);
    std::vector<TokenSeq> queries;
    for (std::size_t i = 0; i < count; ++i) queries.push_back(sample_tokens(*test[first + i]));
    const Eigen::MatrixXd sim = index.query(queries);
    for (std::size_t i = 0; i < count; ++i) {
      Eigen::Index best = 0;
      sim.row(static_cast<Eigen::Index>(i)).maxCoeff(&best);
      const double s = sim(static_cast<Eigen::Index>(i), best);
      deviation += std::abs(s - params.split_overlap);
      r.matches.push_back({test[first + i]->sample->id,
                           train[static_cast<std::size_t>(best)]->sample->id, s});
    }
  }
  r.terms["T1"] = static_cast<double>(test.size()) / (deviation + 1.0);
  r.value = recompute_value(r);
  return r;
}

DqiReport assemble(std::map<Component, ComponentReport> components,
                   const HyperParams& params) {
  DqiReport report;
  report.components = std::move(components);
  std::map<Component, double> values;
  for (const auto& [c, r] : report.components) values[c] = r.value;
  report.aggregate = aggregate(values, params);
  report.stopword_version = TextResources::bundled().stopword_version();
  report.tagger_version = TextResources::bundled().tagger_version();
  return report;
}

ComponentReport zero_c7(std::string reason) {
  ComponentReport r;
  r.component = Component::kC7;
  r.terms["T1"] = 0.0;
  r.value = 0.0;
  r.skipped["T1"] = std::move(reason);
  return r;
}

}  // namespace

std::string_view to_string(Component component) {
  static constexpr std::string_view names[] = {"c1", "c2", "c3", "c4",
                                               "c5", "c6", "c7"};
  return names[static_cast<int>(component)];
}

std::optional<Component> parse_component(std::string_view text) {
  for (const auto c : kAllComponents)
    if (to_string(c) == text) return c;
  return std::nullopt;
}

std::string_view to_string(Granularity granularity) {
  static constexpr std::string_view names[] = {
      "words", "adjectives", "adverbs", "verbs",
      "nouns", "bigrams",    "trigrams", "sentences"};
  return names[static_cast<int>(granularity)];
}

std::optional<Granularity> parse_granularity(std::string_view text) {
  for (const auto g : kAllGranularities)
    if (to_string(g) == text) return g;
  return std::nullopt;
}

std::vector<std::string> sample_units(const Sample& sample, Granularity granularity) {
  SampleText t;
  t.sample = &sample;
  t.premise = tokenize(sample.premise);
  t.hypothesis = tokenize(sample.hypothesis);
  t.premise_content = content_tokens(t.premise);
  t.hypothesis_content = content_tokens(t.hypothesis);
  return sample_units(t, granularity);
}

bool is_mass_gated(Granularity g) {
  return g == Granularity::kBigrams || g == Granularity::kTrigrams ||
         g == Granularity::kSentences;
}

bool is_pos_granularity(Granularity g) {
  return g == Granularity::kAdjectives || g == Granularity::kAdverbs ||
         g == Granularity::kVerbs || g == Granularity::kNouns;
}

std::map<Granularity, FrequencyBounds> HyperParams::default_bounds() {
  return {
      {Granularity::kWords, {1, 50}},     {Granularity::kAdjectives, {1, 50}},
      {Granularity::kAdverbs, {1, 50}},   {Granularity::kVerbs, {1, 50}},
      {Granularity::kNouns, {1, 50}},     {Granularity::kBigrams, {0, 20}},
      {Granularity::kTrigrams, {0, 10}},  {Granularity::kSentences, {0, 2}},
  };
}

std::map<Component, double> HyperParams::default_weights() {
  std::map<Component, double> w;
  for (const auto c : kAllComponents) w[c] = 1.0;
  return w;
}

FrequencyBounds HyperParams::bounds(Granularity g) const {
  const auto it = frequency_bounds.find(g);
  return it == frequency_bounds.end() ? default_bounds().at(g) : it->second;
}

void HyperParams::validate() const {
  const auto fail = [](const std::string& what) {
    throw Error(ErrorCode::kInvalidParams, what);
  };
  const auto unit = [&](double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) fail(std::string(name) + " must lie in [0,1]");
  };
  if (length_lower >= length_upper) fail("a must be below b");
  for (const auto& [g, b] : frequency_bounds)
    if (b.lower >= b.upper)
      fail("c must be below d for " + std::string(to_string(g)));
  unit(min_similarity, "SIM");
  unit(target_word_similarity, "WSIM");
  unit(target_pair_similarity, "ISIM");
  unit(split_overlap, "SSIM");
  if (!(top_fraction > 0.0 && top_fraction <= 1.0)) fail("e must lie in (0,1]");
  if (label_frequency_cap < 1) fail("g must be positive");
  if (!(sigma_epsilon >= 0.0)) fail("sigma_epsilon must be non-negative");
  if (min_granularity_mass < 0) fail("min_granularity_mass must be non-negative");
  if (!(overlap_floor > 0.0)) fail("overlap_floor must be positive");
  for (const auto& [c, w] : aggregate_weights)
    if (!(w >= 0.0)) fail("aggregate weight of " + std::string(to_string(c)) + " is negative");
}

double ComponentReport::term(std::string_view key) const {
  const auto it = terms.find(std::string(key));
  if (it == terms.end())
    throw Error(ErrorCode::kInvalidParams, std::string(to_string(component)) +
                                               " has no term '" + std::string(key) + "'");
  return it->second;
}

double recompute_value(const ComponentReport& r) {
  const auto t = [&](const char* k) {
    const auto it = r.terms.find(k);
    return it == r.terms.end() ? 0.0 : it->second;
  };
  switch (r.component) {
    case Component::kC1:
      return t("T1") + t("T2") * t("T3");
    case Component::kC2: {
      double v = 0.0;
      for (const auto& [k, g] : r.granularities) v += g.contribution();
      return v;
    }
    case Component::kC3:
      return t("T1") + t("T2");
    case Component::kC4:
    case Component::kC7:
      return t("T1");
    case Component::kC5:
      return t("T1") + t("T2") + t("T3") + t("T4") + t("T5") + t("T6");
    case Component::kC6: {
      double v = 0.0;
      for (const auto& [k, g] : r.granularities) v += g.contribution();
      for (const auto& [k, term] : r.terms) v += term;
      return v;
    }
  }
  return 0.0;
}

ComponentReport compute_c1(const Dataset& d, const HyperParams& p) {
  return c1_from(extract(d), p);
}
ComponentReport compute_c2(const Dataset& d, const HyperParams& p) {
  return c2_from(extract(d), p);
}
ComponentReport compute_c3(const Dataset& d, const SimilarityProvider&,
                           const HyperParams& p) {
  return c3_from(extract(d), p);
}
ComponentReport compute_c4(const Dataset& d, const SimilarityProvider& provider,
                           const HyperParams& p) {
  return c4_from(extract(d), provider, p);
}
ComponentReport compute_c5(const Dataset& d, const SimilarityProvider& provider,
                           const HyperParams& p) {
  return c5_from(extract(d), provider, p);
}
ComponentReport compute_c6(const Dataset& d, const HyperParams& p) {
  return c6_from(extract(d), p);
}
ComponentReport compute_c7(const Dataset& d, const SimilarityProvider&,
                           const HyperParams& p) {
  return c7_from(extract(d), p);
}

double aggregate(const std::map<Component, double>& values,
                 const HyperParams& params) {
  double sum = 0.0;
  for (const auto& [c, v] : values) {
    const auto it = params.aggregate_weights.find(c);
    sum += (it == params.aggregate_weights.end() ? 0.0 : it->second) * v;
  }
  return sum;
}

DqiReport compute_all(const Dataset& dataset, const SimilarityProvider& provider,
                      const HyperParams& params) {
  const Features f = extract(dataset);
  require_samples(f);
  std::map<Component, ComponentReport> c;
  c[Component::kC1] = c1_from(f, params);
  c[Component::kC2] = c2_from(f, params);
  c[Component::kC3] = c3_from(f, params);
  c[Component::kC4] = c4_from(f, provider, params);
  c[Component::kC5] = c5_from(f, provider, params);
  c[Component::kC6] = c6_from(f, params);
  try {
    c[Component::kC7] = c7_from(f, params);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kMissingSplit) throw;
    c[Component::kC7] = zero_c7("missing split: " + std::string(e.what()));
  }
  return assemble(std::move(c), params);
}

DqiReport cold_start(const Sample& sample, const SimilarityProvider& provider,
                     const HyperParams& params) {
  const Dataset single({sample});
  const Features f = extract(single);
  const SampleText& t = f.samples.front();
  const double pair_sim = provider.sentence_similarity(t.premise, t.hypothesis, f.stats);

  std::map<Component, ComponentReport> c;
  c[Component::kC1] = c1_from(f, params);
  c[Component::kC2] = c2_from(f, params);

  ComponentReport c3;
  c3.component = Component::kC3;
  c3.terms["T1"] = pair_sim;  // the single similarity stands in for the spread
  c3.terms["T2"] = 2.0;
  c3.value = recompute_value(c3);
  c[Component::kC3] = std::move(c3);

  c[Component::kC4] = c4_from(f, provider, params);

  ComponentReport c5 = c5_from(f, provider, params);
  c5.terms["T3"] = 0.0;
  c5.terms["T4"] = pair_sim;
  c5.value = recompute_value(c5);
  c[Component::kC5] = std::move(c5);

  c[Component::kC6] = c6_from(f, params, sample.label);
  c[Component::kC7] = zero_c7("cold start");
  return assemble(std::move(c), params);
}

double ImpactReport::term_delta(Component component, std::string_view term) const {
  return before.at(component).term(term) - after.at(component).term(term);
}

ImpactReport impact(const Dataset& dataset, const Sample& sample,
                    const SimilarityProvider& provider, const HyperParams& params) {
  if (dataset.empty())
    throw Error(ErrorCode::kEmptyDataset, "impact needs a preexisting dataset");
  ImpactReport r;
  r.before = compute_all(dataset, provider, params);
  r.after = compute_all(add_trial_sample(dataset, sample), provider, params);
  for (const auto c : kAllComponents) {
    r.x1[c] = r.before.value(c);
    r.x2[c] = r.after.value(c);
    r.delta[c] = r.x1[c] - r.x2[c];
  }
  return r;
}

}  // namespace dqi
