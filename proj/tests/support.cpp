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

#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <set>
#include <stdexcept>

#include <sys/wait.h>
#include <unistd.h>

#include "dqi/textprims.hpp"

namespace dqi::testing {

namespace {

const std::vector<std::string> kSubjects = {
    "A man", "A woman", "Two children", "The dog", "An old farmer", "A girl",
    "Three workers", "The chef", "A young boy", "Some people", "A tired runner"};
const std::vector<std::string> kVerbs = {
    "is walking", "runs", "plays", "is eating", "carries", "watches", "is painting",
    "sits", "jumps", "is cooking", "reads", "smiles"};
const std::vector<std::string> kObjects = {
    "a red ball", "the green field", "a large sandwich", "the busy street",
    "a small boat", "an old guitar", "the quiet library", "a heavy box",
    "the blue water", "a bright kite", "the snowy hill"};
const std::vector<std::string> kTails = {
    "", " in the park", " near the river", " quickly", " at night",
    " with a friend", " outside", " during the game", " on a sunny day"};

template <typename T>
const T& pick(std::mt19937_64& rng, const std::vector<T>& v) {
  return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
}

std::string sentence(std::mt19937_64& rng) {
  return pick(rng, kSubjects) + " " + pick(rng, kVerbs) + " " + pick(rng, kObjects) +
         pick(rng, kTails) + ".";
}

std::vector<std::string> units(const std::vector<std::string>& tokens,
                               const std::vector<std::string>& content, Granularity g) {
  std::vector<std::string> out;
  switch (g) {
    case Granularity::kWords:
      return content;
    case Granularity::kAdjectives:
    case Granularity::kAdverbs:
    case Granularity::kVerbs:
    case Granularity::kNouns: {
      const PosTag want = g == Granularity::kAdjectives ? PosTag::kAdjective
                          : g == Granularity::kAdverbs  ? PosTag::kAdverb
                          : g == Granularity::kVerbs    ? PosTag::kVerb
                                                        : PosTag::kNoun;
      for (const auto& w : content)
        if (tag_word(w) == want) out.push_back(w);
      return out;
    }
    case Granularity::kBigrams:
      for (std::size_t i = 0; i + 1 < tokens.size(); ++i)
        out.push_back(tokens[i] + " " + tokens[i + 1]);
      return out;
    case Granularity::kTrigrams:
      for (std::size_t i = 0; i + 2 < tokens.size(); ++i)
        out.push_back(tokens[i] + " " + tokens[i + 1] + " " + tokens[i + 2]);
      return out;
    case Granularity::kSentences: {
      if (tokens.empty()) return out;
      std::string s = tokens[0];
      for (std::size_t i = 1; i < tokens.size(); ++i) s += " " + tokens[i];
      out.push_back(s);
      return out;
    }
  }
  return out;
}

struct Doc {
  std::vector<std::string> p, h, pc, hc;
  Label label;
  Split split;
};

struct FreqTerms {
  bool kept = false;
  double t1 = 0, t2 = 0;
};

int sgn(double v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

FreqTerms freq_terms(const std::map<std::string, long>& f, Granularity g, double lo,
                     double hi, const HyperParams& params) {
  FreqTerms out;
  if (f.empty()) return out;
  long mass = 0;
  for (const auto& [u, v] : f) mass += v;
  const bool gated = g == Granularity::kBigrams || g == Granularity::kTrigrams ||
                     g == Granularity::kSentences;
  if (gated && mass < params.min_granularity_mass) return out;
  const double U = static_cast<double>(f.size());
  std::vector<double> normalized;
  double signs = 0;
  for (const auto& [u, v] : f) {
    normalized.push_back(v / U);
    signs += sgn((v - lo) * (hi - v));
  }
  const double sd = oracle::stddev(normalized);
  if (f.size() < 2 || sd < params.sigma_epsilon) return out;
  out.kept = true;
  out.t1 = 1.0 / sd;
  out.t2 = signs / U;
  return out;
}

}  // namespace

std::string fixture_path(const std::string& name) {
  return std::string(DQI_SOURCE_DIR) + "/data/" + name;
}

Dataset fixture() { return load_dataset(fixture_path("fixture.jsonl"), DatasetFormat::kJsonl); }

Dataset random_corpus(std::uint64_t seed, const CorpusShape& shape) {
  std::mt19937_64 rng(seed);
  const std::size_t n = std::uniform_int_distribution<std::size_t>(
      shape.min_samples, shape.max_samples)(rng);
  std::vector<Sample> samples;
  std::vector<std::string> premises;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const Split splits[] = {Split::kTrain, Split::kTrain, Split::kDev, Split::kTest};
  for (std::size_t i = 0; i < n; ++i) {
    Sample s;
    s.id = "g" + std::to_string(i);
    if (!premises.empty() && unit(rng) < shape.shared_premise_rate)
      s.premise = pick(rng, premises);
    else
      s.premise = sentence(rng);
    premises.push_back(s.premise);
    s.hypothesis = unit(rng) < 0.1 ? s.premise : sentence(rng);
    if (unit(rng) < 0.3) s.hypothesis = pick(rng, kSubjects) + " " + pick(rng, kVerbs) + ".";
    s.label = kAllLabels[std::uniform_int_distribution<int>(0, 2)(rng)];
    if (shape.annotators > 0)
      s.annotator_id =
          "ann" + std::to_string(std::uniform_int_distribution<std::size_t>(
                                     1, shape.annotators)(rng));
    if (shape.with_splits) s.split = splits[std::uniform_int_distribution<int>(0, 3)(rng)];
    samples.push_back(std::move(s));
  }
  return Dataset(std::move(samples));
}

Dataset annotated_corpus(std::uint64_t seed, std::size_t annotators) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Sample> samples;
  std::vector<std::string> all_premises;
  for (std::size_t a = 0; a < annotators; ++a) {
    const std::string who = "w" + std::to_string(a);
    const int count = std::uniform_int_distribution<int>(3, 6)(rng);
    std::vector<std::string> own;
    for (int k = 0; k < count; ++k) {
      std::string premise;
      const double roll = unit(rng);
      if (roll < 0.4 && !own.empty())
        premise = pick(rng, own);
      else if (roll >= 0.4 && roll < 0.43 && !all_premises.empty())
        premise = pick(rng, all_premises);
      else
        premise = sentence(rng) + " #" + std::to_string(samples.size());
      own.push_back(premise);
      all_premises.push_back(premise);
      samples.push_back(make_sample("x" + std::to_string(samples.size()), premise,
                                    sentence(rng), kAllLabels[samples.size() % 3],
                                    Split::kUnassigned, who));
    }
  }
  return Dataset(std::move(samples));
}

std::pair<Dataset, PartitionMembership> partition_fixture() {
  const std::vector<std::pair<std::string, std::string>> good = {
      {"A chef slices onions in a crowded kitchen.", "Someone prepares vegetables for dinner."},
      {"Two surfers ride a tall wave at dawn.", "People enjoy the ocean early."},
      {"An elderly couple dances at a wedding.", "Grandparents celebrate a marriage."},
      {"A mechanic repairs an engine under a truck.", "Somebody fixes a vehicle."},
      {"Children build a snowman beside their house.", "Kids play in winter weather."},
      {"A violinist performs on a subway platform.", "Music echoes through the station."},
      {"A firefighter sprays water onto burning timber.", "Flames are being extinguished."},
      {"Students study quietly inside a library.", "Pupils prepare for exams."},
      {"A farmer drives a tractor across wheat.", "Crops get harvested."},
      {"A toddler splashes puddles wearing boots.", "The infant enjoys rainy mud."},
      {"Tourists photograph an ancient cathedral.", "Visitors admire historic architecture."},
      {"A cyclist climbs a steep mountain road.", "An athlete trains uphill."},
      {"Fishermen haul nets onto a wooden deck.", "Sailors gather their catch."},
      {"A painter sketches sunflowers near a barn.", "An artist draws yellow blossoms."},
      {"Volunteers plant saplings along a riverbank.", "Helpers grow new forests."},
      {"A baker pulls fresh bread from an oven.", "Loaves come out hot."},
      {"Runners cross a finish line downtown.", "A marathon ends in the city."},
      {"A nurse comforts a frightened patient.", "Hospital staff reassure someone."},
      {"Skiers glide past pine trees.", "Winter sports happen on slopes."},
      {"A magician pulls a rabbit from his hat.", "Spectators watch a trick."}};
  const std::vector<std::string> bad_premises = {
      "A man is walking a dog in the park.", "A woman is sitting on a bench in the park.",
      "A boy is playing with a ball in the park.", "A girl is walking a dog on the street."};
  std::vector<Sample> samples;
  PartitionMembership membership;
  const Split splits[] = {Split::kTrain, Split::kTrain, Split::kTrain, Split::kTest};
  for (std::size_t i = 0; i < good.size(); ++i) {
    const std::string id = "good" + std::to_string(i + 1);
    samples.push_back(make_sample(id, good[i].first, good[i].second, kAllLabels[i % 3],
                                  splits[i % 4], "g" + std::to_string(i % 5)));
    membership[id] = Partition::kGood;
  }
  for (std::size_t i = 0; i < 20; ++i) {
    const std::string id = "bad" + std::to_string(i + 1);
    const auto& premise = bad_premises[i % bad_premises.size()];
    auto words = tokenize(premise);
    words.erase(words.begin() + static_cast<std::ptrdiff_t>(1 + i % (words.size() - 1)));
    std::string hypothesis;
    for (const auto& w : words) hypothesis += (hypothesis.empty() ? "" : " ") + w;
    samples.push_back(make_sample(id, premise, hypothesis + ".", kAllLabels[i % 3],
                                  splits[i % 4], "b" + std::to_string(i % 5)));
    membership[id] = Partition::kBad;
  }
  return {Dataset(std::move(samples)), membership};
}

Sample make_sample(std::string id, std::string premise, std::string hypothesis, Label label,
                   Split split, std::optional<std::string> annotator) {
  Sample s;
  s.id = std::move(id);
  s.premise = std::move(premise);
  s.hypothesis = std::move(hypothesis);
  s.label = label;
  s.split = split;
  s.annotator_id = std::move(annotator);
  return s;
}

std::vector<Sample> red_autofix_suite() {
  const std::vector<std::pair<std::string, std::string>> actors = {
      {"man", "walks"},     {"woman", "sings"},   {"boy", "runs"},
      {"girl", "dances"},   {"dog", "jumps"},     {"child", "plays"},
      {"worker", "eats"},   {"player", "throws"}, {"lady", "smiles"},
      {"team", "waits"},    {"cat", "sits"},      {"horse", "stands"},
      {"baby", "laughs"},   {"mother", "cooks"},  {"father", "reads"},
      {"friend", "drinks"}, {"crowd", "watches"}, {"kid", "climbs"},
      {"person", "swims"},  {"group", "talks"}};
  const std::vector<std::string> places = {"beach", "park", "river", "street", "field"};
  std::vector<Sample> out;
  for (std::size_t i = 0; i < actors.size(); ++i) {
    const auto& [who, verb] = actors[i];
    const auto& where = places[i % places.size()];
    out.push_back(make_sample("red" + std::to_string(i + 1),
                              "A " + who + " " + verb + " near the " + where + " today.",
                              "A " + who + " " + verb + ".", kAllLabels[i % 3], Split::kTrain,
                              "ann0" + std::to_string(i % 4 + 1)));
  }
  return out;
}

int run_cli(const std::string& args, const std::string& log) {
  const std::string command =
      std::string("\"") + DQI_CLI_PATH + "\" " + args + " > \"" + log + "\" 2>&1";
  const int raw = std::system(command.c_str());
  return raw == -1 ? -1 : WEXITSTATUS(raw);
}

std::string scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() /
                   ("dqi_" + name + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir.string();
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  throw std::logic_error("no dqi::Error thrown");
}

bool close(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

namespace oracle {

double stddev(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  double mean = 0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double ss = 0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

double sentence_similarity(const std::vector<std::string>& a,
                           const std::vector<std::string>& b,
                           const std::vector<std::vector<std::string>>& corpus) {
  const auto idf = [&](const std::string& t) {
    double df = 0;
    for (const auto& s : corpus) df += std::find(s.begin(), s.end(), t) != s.end();
    return std::log((1.0 + corpus.size()) / (1.0 + df)) + 1.0;
  };
  std::set<std::string> vocab(a.begin(), a.end());
  vocab.insert(b.begin(), b.end());
  double dot = 0, na = 0, nb = 0;
  for (const auto& t : vocab) {
    const double w = idf(t);
    const double x = std::count(a.begin(), a.end(), t) * w;
    const double y = std::count(b.begin(), b.end(), t) * w;
    dot += x * y;
    na += x * x;
    nb += y * y;
  }
  if (na == 0 || nb == 0) return 0.0;
  return std::clamp(dot / std::sqrt(na * nb), 0.0, 1.0);
}

double word_similarity(const std::string& a, const std::string& b) {
  if (a == b) return 1.0;
  const auto grams = [](const std::string& w) {
    std::set<std::string> out;
    const std::string p = "#" + w + "#";
    for (std::size_t i = 0; i + 3 <= p.size(); ++i) out.insert(p.substr(i, 3));
    return out;
  };
  const auto ga = grams(a), gb = grams(b);
  std::set<std::string> inter, uni(ga);
  for (const auto& g : ga)
    if (gb.count(g)) inter.insert(g);
  uni.insert(gb.begin(), gb.end());
  return uni.empty() ? 0.0 : static_cast<double>(inter.size()) / uni.size();
}

std::map<std::string, double> evaluate(const Dataset& dataset, const HyperParams& params) {
  std::map<std::string, double> out;
  std::vector<Doc> docs;
  std::vector<std::vector<std::string>> sentences;
  for (const auto& s : dataset.samples()) {
    Doc d;
    d.p = tokenize(s.premise);
    d.h = tokenize(s.hypothesis);
    d.pc = content_tokens(d.p);
    d.hc = content_tokens(d.h);
    d.label = s.label;
    d.split = s.split;
    sentences.push_back(d.p);
    sentences.push_back(d.h);
    docs.push_back(std::move(d));
  }
  const double n = static_cast<double>(docs.size());
  const double S = static_cast<double>(sentences.size());

  // c1
  {
    std::set<std::string> vocab;
    std::vector<double> lengths;
    double signs = 0;
    for (const auto& d : docs) {
      vocab.insert(d.pc.begin(), d.pc.end());
      vocab.insert(d.hc.begin(), d.hc.end());
      for (const auto* t : {&d.p, &d.h}) {
        const double len = static_cast<double>(t->size());
        lengths.push_back(len);
        signs += sgn((len - params.length_lower) * (params.length_upper - len));
      }
    }
    out["c1.T1"] = vocab.size() / n;
    out["c1.T2"] = stddev(lengths);
    out["c1.T3"] = signs / S;
    out["c1"] = out["c1.T1"] + out["c1.T2"] * out["c1.T3"];
  }

  // c2
  {
    double value = 0;
    for (const auto g : kAllGranularities) {
      std::map<std::string, long> f;
      for (const auto& d : docs) {
        for (const auto& u : units(d.p, d.pc, g)) ++f[u];
        for (const auto& u : units(d.h, d.hc, g)) ++f[u];
      }
      const auto b = params.bounds(g);
      const auto t = freq_terms(f, g, b.lower, b.upper, params);
      if (!t.kept) continue;
      const std::string key = "c2." + std::string(to_string(g));
      out[key + ".T1"] = t.t1;
      out[key + ".T2"] = t.t2;
      value += t.t1 * t.t2;
    }
    out["c2"] = value;
  }

  // c3
  {
    std::vector<double> below;
    double penalty = 0;
    const auto k = static_cast<std::size_t>(std::ceil(params.top_fraction * (S - 1) - 1e-9));
    for (std::size_t l = 0; l < sentences.size(); ++l) {
      double count = 0;
      std::vector<double> p;
      for (std::size_t m = 0; m < sentences.size(); ++m) {
        if (m == l) continue;
        const double sim = sentence_similarity(sentences[l], sentences[m], sentences);
        if (sim < params.min_similarity) ++count;
        const double diff = sim - params.min_similarity;
        p.push_back(std::abs(diff) - diff);
      }
      below.push_back(count);
      std::sort(p.rbegin(), p.rend());
      for (std::size_t j = 0; j < std::max<std::size_t>(1, k) && j < p.size(); ++j)
        penalty += p[j];
    }
    out["c3.T1"] = S / (stddev(below) + 1);
    out["c3.T2"] = 2 * S / (penalty + 1);
    out["c3"] = out["c3.T1"] + out["c3.T2"];
  }

  // c4
  {
    double total = 0;
    for (const auto& d : docs)
      for (const auto* w : {&d.pc, &d.hc}) {
        if (w->size() < 2) continue;
        for (std::size_t l = 0; l < w->size(); ++l) {
          double sum = 0;
          for (std::size_t m = 0; m < w->size(); ++m)
            if (m != l) sum += word_similarity((*w)[l], (*w)[m]);
          total += std::abs(sum / (w->size() - 1) - params.target_word_similarity);
        }
      }
    out["c4.T1"] = S / (total + 1);
    out["c4"] = out["c4.T1"];
  }

  // c5
  {
    std::vector<double> sims, gaps;
    double dev = 0, ratio_sum = 0, inv_sum = 0;
    for (const auto& d : docs) {
      const double sim = sentence_similarity(d.p, d.h, sentences);
      sims.push_back(sim);
      dev += std::abs(sim - params.target_pair_similarity);
      gaps.push_back(std::abs(static_cast<double>(d.p.size()) - static_cast<double>(d.h.size())));
      const std::set<std::string> pu(d.pc.begin(), d.pc.end()), hu(d.hc.begin(), d.hc.end());
      double overlap = 0;
      for (const auto& w : hu) overlap += pu.count(w);
      ratio_sum += (d.pc.size() + d.hc.size()) / std::max(overlap, params.overlap_floor);
      double ws = 0;
      for (const auto& h : hu) {
        double best = 0;
        for (const auto& p : pu) best = std::max(best, word_similarity(h, p));
        ws += best;
      }
      inv_sum += 1.0 / std::max(ws, params.overlap_floor);
    }
    double gap_sum = 0;
    for (double g : gaps) gap_sum += g;
    out["c5.T1"] = n / (dev + 1);
    out["c5.T2"] = n / (gap_sum + 1);
    out["c5.T3"] = stddev(gaps) / n;
    out["c5.T4"] = stddev(sims) / n;
    out["c5.T5"] = ratio_sum / n;
    out["c5.T6"] = inv_sum / n;
    out["c5"] = out["c5.T1"] + out["c5.T2"] + out["c5.T3"] + out["c5.T4"] + out["c5.T5"] +
                out["c5.T6"];
  }

  // c6
  {
    double value = 0;
    for (const auto label : kAllLabels) {
      const std::string lname(to_string(label));
      std::vector<const Doc*> members;
      for (const auto& d : docs)
        if (d.label == label) members.push_back(&d);
      if (members.empty()) continue;
      for (const auto g : kAllGranularities) {
        std::map<std::string, long> f;
        for (const auto* d : members) {
          for (const auto& u : units(d->p, d->pc, g)) ++f[u];
          for (const auto& u : units(d->h, d->hc, g)) ++f[u];
        }
        const auto t = freq_terms(f, g, 0, params.label_frequency_cap, params);
        if (!t.kept) continue;
        const std::string key = "c6." + lname + "." + std::string(to_string(g));
        out[key + ".T1"] = t.t1;
        out[key + ".T2"] = t.t2;
        value += t.t1 * t.t2;
      }
      std::vector<double> gaps;
      double gap_sum = 0;
      for (const auto* d : members) {
        gaps.push_back(std::abs(static_cast<double>(d->p.size()) - static_cast<double>(d->h.size())));
        gap_sum += gaps.back();
      }
      const double nl = static_cast<double>(members.size());
      out["c6." + lname + ".T3"] = nl / (gap_sum + 1);
      out["c6." + lname + ".T4"] = stddev(gaps) / nl;
      value += out["c6." + lname + ".T3"] + out["c6." + lname + ".T4"];
    }
    for (const auto g : kAllGranularities) {
      std::map<std::string, std::array<long, 3>> counts;
      long mass = 0;
      for (const auto& d : docs) {
        auto all = units(d.p, d.pc, g);
        const auto hu = units(d.h, d.hc, g);
        all.insert(all.end(), hu.begin(), hu.end());
        for (const auto& u : all) {
          ++counts[u][static_cast<std::size_t>(d.label)];
          ++mass;
        }
      }
      if (counts.empty()) continue;
      const bool gated = g == Granularity::kBigrams || g == Granularity::kTrigrams ||
                         g == Granularity::kSentences;
      if (gated && mass < params.min_granularity_mass) continue;
      double spread = 0;
      for (const auto& [u, c] : counts) {
        if (c[0] + c[1] + c[2] < 2) continue;
        std::vector<double> v;
        for (long x : c) v.push_back(static_cast<double>((std::abs(1 - x) - (1 - x)) / 2));
        spread += stddev(v);
      }
      const std::string key = "c6.T5." + std::string(to_string(g));
      out[key] = counts.size() / (spread + 1);
      value += out[key];
    }
    out["c6"] = value;
  }

  // c7
  {
    std::vector<const Doc*> train, test;
    for (const auto& d : docs) {
      if (d.split == Split::kTrain) train.push_back(&d);
      if (d.split == Split::kTest) test.push_back(&d);
    }
    if (train.empty() || test.empty()) {
      out["c7.T1"] = 0.0;
      out["c7"] = 0.0;
    } else {
      double dev = 0;
      for (const auto* t : test) {
        auto tv = t->p;
        tv.insert(tv.end(), t->h.begin(), t->h.end());
        double best = 0;
        for (const auto* r : train) {
          auto rv = r->p;
          rv.insert(rv.end(), r->h.begin(), r->h.end());
          best = std::max(best, sentence_similarity(tv, rv, sentences));
        }
        dev += std::abs(best - params.split_overlap);
      }
      out["c7.T1"] = test.size() / (dev + 1);
      out["c7"] = out["c7.T1"];
    }
  }

  double aggregate = 0;
  for (const auto c : kAllComponents) {
    const auto it = params.aggregate_weights.find(c);
    aggregate += (it == params.aggregate_weights.end() ? 0.0 : it->second) *
                 out[std::string(to_string(c))];
  }
  out["aggregate"] = aggregate;
  return out;
}

}  // namespace oracle

}  // namespace dqi::testing
