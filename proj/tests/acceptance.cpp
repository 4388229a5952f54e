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

// Acceptance run: one PASS/FAIL line per criterion, non-zero exit on failure.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dqi/autofix.hpp"
#include "dqi/bands.hpp"
#include "dqi/config.hpp"
#include "dqi/corpus.hpp"
#include "dqi/engine.hpp"
#include "dqi/report.hpp"
#include "dqi/splitkit.hpp"
#include "support.hpp"

namespace {

using namespace dqi;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
};

double millis(Clock::duration d) {
  return std::chrono::duration<double, std::milli>(d).count();
}

// Median wall time of `runs` calls.
double median_ms(const std::function<void()>& fn, int runs = 7) {
  std::vector<double> t;
  for (int i = 0; i < runs; ++i) {
    const auto start = Clock::now();
    fn();
    t.push_back(millis(Clock::now() - start));
  }
  std::sort(t.begin(), t.end());
  return t[t.size() / 2];
}

std::string fmt(double v) {
  std::ostringstream out;
  out.precision(6);
  out << v;
  return out.str();
}

const SimilarityProvider& lexical() {
  static const auto p = SimilarityProvider::lexical();
  return p;
}

Sample s1_sample() {
  return testing::make_sample("S1", "A woman, in a green shirt, preparing to run on a treadmill.",
                              "A woman is preparing to sleep on a treadmill.",
                              Label::kContradiction, Split::kTrain);
}

Outcome c1_cold_start_anchor() {
  HyperParams params;
  params.length_lower = 3;
  params.length_upper = 30;
  DqiReport r;
  const double ms = median_ms([&] { r = cold_start(s1_sample(), lexical(), params); });
  const auto& c1 = r.at(Component::kC1);
  Outcome o;
  o.pass = std::abs(c1.term("T2") - 2.1213) <= 0.001 && c1.term("T3") == 1.0 && ms < 1.0;
  o.detail = "T2=" + fmt(c1.term("T2")) + " T3=" + fmt(c1.term("T3")) + " time=" + fmt(ms) + "ms";
  return o;
}

Outcome c2_anchor() {
  const Dataset d({s1_sample()});
  ComponentReport c2;
  const double ms = median_ms([&] { c2 = compute_c2(d, HyperParams{}); });
  // Frequencies of the content words, independently of the engine's table.
  std::map<std::string, int> freq;
  for (const auto* text : {&d.samples()[0].premise, &d.samples()[0].hypothesis})
    for (const auto& w : content_tokens(tokenize(*text))) ++freq[w];
  std::multiset<int> multiset;
  for (const auto& [w, f] : freq) multiset.insert(f);
  const std::multiset<int> want = {2, 2, 2, 1, 1, 1, 1};
  const double t1 = c2.granularities.at("words").t1;
  Outcome o;
  o.pass = multiset == want && std::abs(t1 - 13.0958) <= 0.01 && ms < 1.0;
  o.detail = "words.T1=" + fmt(t1) + " time=" + fmt(ms) + "ms";
  return o;
}

Outcome c5_overlap_anchor() {
  const auto s9 = testing::make_sample("S9", "Two dogs chase a ball.", "Cats sleep indoors.",
                                       Label::kContradiction);
  const Dataset d({s9});
  const auto band = make_band(Orientation::kHighGreen, {9.8333, kInf}, {3.9375, kInf});
  ComponentReport c5;
  FlagColor color = FlagColor::kGreen;
  const double ms = median_ms([&] {
    c5 = compute_c5(d, lexical(), HyperParams{});
    color = band.color(2.0);
  });
  const auto& p = c5.pairs.at(0);
  Outcome o;
  o.pass = p.premise_content + p.hypothesis_content == 7 && p.overlap_count == 0 &&
           p.overlap_ratio == 70.0 && color == FlagColor::kRed && ms < 1.0;
  o.detail = "S9 ratio=" + fmt(p.overlap_ratio) + " ratio 2.0 -> " +
             std::string(to_string(color)) + " time=" + fmt(ms) + "ms";
  return o;
}

Outcome cold_start_overrides() {
  testing::CorpusShape shape;
  shape.min_samples = 50;
  shape.max_samples = 50;
  const auto d = testing::random_corpus(2026, shape);
  int bad = 0;
  for (const auto& s : d.samples()) {
    const auto r = cold_start(s, lexical(), HyperParams{});
    bool ok = r.at(Component::kC3).term("T2") == 2.0 && r.at(Component::kC5).term("T3") == 0.0 &&
              r.value(Component::kC7) == 0.0;
    for (const auto g : kAllGranularities)
      ok = ok && r.at(Component::kC6).term("T5." + std::string(to_string(g))) == 0.0;
    bad += !ok;
  }
  return {d.size() == 50 && bad == 0,
          std::to_string(d.size()) + " samples, " + std::to_string(bad) + " violations"};
}

Outcome oracle_equivalence() {
  double worst = 0.0;
  std::string worst_key;
  int mismatches = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto d = testing::random_corpus(seed * 7919);
    const HyperParams params;
    const auto report = compute_all(d, lexical(), params);
    const auto flat = flatten(report);
    for (const auto& [key, want] : testing::oracle::evaluate(d, params)) {
      double got;
      if (key == "aggregate") {
        got = report.aggregate;
      } else if (auto it = flat.find(key); it != flat.end()) {
        got = it->second;
      } else {
        ++mismatches;
        continue;
      }
      const double rel = std::abs(got - want) / std::max(1.0, std::max(std::abs(got), std::abs(want)));
      if (rel > worst) {
        worst = rel;
        worst_key = key + "@" + std::to_string(seed);
      }
      if (rel > 1e-9) ++mismatches;
    }
  }
  return {mismatches == 0,
          "100 corpora, max rel err=" + fmt(worst) + (worst_key.empty() ? "" : " (" + worst_key + ")") +
              ", mismatches=" + std::to_string(mismatches)};
}

Outcome impact_algebra() {
  std::vector<Dataset> fixtures = {testing::fixture(), testing::partition_fixture().first};
  int algebra = 0, undo = 0, dup = 0, checked = 0;
  for (const auto& d : fixtures) {
    const auto draft = testing::make_sample("acc-draft", "A man is cooking dinner at home.",
                                            "Someone prepares food.", Label::kEntailment,
                                            Split::kTest);
    const auto r = impact(d, draft, lexical(), HyperParams{});
    for (const auto c : kAllComponents) algebra += r.delta.at(c) != r.x1.at(c) - r.x2.at(c);
    const auto restored = compute_all(undo_trial(add_trial_sample(d, draft)), lexical(), HyperParams{});
    for (const auto c : kAllComponents) undo += restored.value(c) != r.x1.at(c);
    undo += restored.aggregate != r.before.aggregate;
    for (const auto& s : d.samples()) {
      auto copy = s;
      copy.id = s.id + "-copy";
      dup += !(impact(d, copy, lexical(), HyperParams{}).term_delta(Component::kC1, "T1") > 0.0);
      ++checked;
    }
  }
  return {algebra == 0 && undo == 0 && dup == 0,
          "delta mismatches=" + std::to_string(algebra) + " undo mismatches=" +
              std::to_string(undo) + " duplicates without c1.T1 gain=" + std::to_string(dup) +
              "/" + std::to_string(checked)};
}

Outcome split_invariants() {
  int violations = 0, tolerance = 0, replay = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto d = testing::annotated_corpus(seed, 20 + seed % 40);
    const auto a = randomize_split(d, seed);
    std::map<std::string, std::set<Split>> by_annotator, by_premise;
    for (const auto& s : d.samples()) {
      by_annotator[s.annotator_id.value_or("")].insert(a.tags.at(s.id));
      by_premise[join(tokenize(s.premise))].insert(a.tags.at(s.id));
    }
    for (const auto& [k, v] : by_annotator) violations += v.size() > 1;
    for (const auto& [k, v] : by_premise) violations += v.size() > 1;
    for (const auto& [split, size] : a.sizes)
      tolerance += std::abs(size - a.targets.at(split)) > split_tolerance(d.size());
    replay += randomize_split(d, seed).tags != a.tags;
  }
  return {violations == 0 && tolerance == 0 && replay == 0,
          "100 seeds: constraint violations=" + std::to_string(violations) +
              " off-tolerance splits=" + std::to_string(tolerance) +
              " non-reproducible=" + std::to_string(replay)};
}

Outcome partition_ordering() {
  const auto [d, membership] = testing::partition_fixture();
  const auto a = compare_partitions(d, membership, lexical(), HyperParams{});
  const auto b = compare_partitions(d, membership, lexical(), HyperParams{});
  const auto& t1 = a.row("c1", "", "T1");
  const auto& t5 = a.row("c5", "", "T5");
  const bool same = comparison_csv(a) == comparison_csv(b);
  return {t1.winner == "good" && t5.winner == "good" && same,
          "c1.T1 good=" + fmt(t1.good) + " bad=" + fmt(t1.bad) + "; c5.T5 good=" + fmt(t5.good) +
              " bad=" + fmt(t5.bad) + (same ? "; deterministic" : "; NOT deterministic")};
}

Outcome autofix_contract() {
  const auto d = testing::fixture();
  const auto& bands = default_config().bands;
  int broken = 0, improved = 0, red = 0;
  const auto suite = testing::red_autofix_suite();
  const auto badness = [](const std::map<std::string, FlagColor>& colors) {
    int r = 0, y = 0;
    for (const auto& [k, c] : colors) {
      r += c == FlagColor::kRed;
      y += c == FlagColor::kYellow;
    }
    return std::make_pair(r, y);
  };
  for (const auto& s : suite) {
    const int budget = static_cast<int>(content_tokens(tokenize(s.hypothesis)).size());
    const auto [fixed, trace] =
        autofix(s, d, lexical(), HyperParams{}, bands, SynonymLexicon::bundled(), budget);
    red += badness(trace.initial_colors).first > 0;
    bool ok = static_cast<int>(trace.edits.size()) <= budget && fixed.label == s.label &&
              fixed.premise == s.premise &&
              apply_edits(trace.original_hypothesis, trace.edits) == fixed.hypothesis;
    auto prev = badness(trace.initial_colors);
    for (const auto& e : trace.edits) {
      ok = ok && badness(e.colors) < prev;
      prev = badness(e.colors);
    }
    broken += !ok;
    improved += !trace.edits.empty();
  }
  return {broken == 0 && red == static_cast<int>(suite.size()),
          std::to_string(suite.size()) + " red cases (" + std::to_string(red) +
              " start red), contract breaches=" + std::to_string(broken) +
              ", improved=" + std::to_string(improved)};
}

Outcome retune_arithmetic() {
  BandSpec spec;
  spec.bands["c1"] = make_band(Orientation::kCenterGreen, {10, 20}, {0, 30});
  spec.bands["c2"] = make_band(Orientation::kCenterGreen, {10, 20}, {0, 30});
  SampleValues values;
  for (int i = 0; i < 5; ++i) values["err" + std::to_string(i)] = {{"c1", 12}, {"c2", 25}};
  for (int i = 0; i < 5; ++i) values["ok" + std::to_string(i)] = {{"c1", 27}, {"c2", 25}};
  const std::set<std::string> errors = {"err0", "err1", "err2", "err3", "err4"};
  const auto once = retune_from_errors(errors, values, spec, 0.20, 0.2);
  const auto twice = retune_from_errors(errors, values, once.bands, 0.20, 0.2);
  const auto& g1 = once.bands.at("c1").green;
  const double w2 = twice.bands.at("c1").green.width();
  bool monotone = true;
  for (double v = -5.0; v <= 35.0; v += 0.125) {
    const auto before = spec.at("c1").color(v);
    const auto after = twice.bands.at("c1").color(v);
    if (before == FlagColor::kGreen)
      monotone = monotone && (after == FlagColor::kGreen || after == FlagColor::kYellow);
    else
      monotone = monotone && after == before;
  }
  const bool untouched = once.bands.at("c2") == spec.at("c2") && twice.bands.at("c2") == spec.at("c2");
  return {g1 == Interval{11, 19} && std::abs(w2 - 6.4) < 1e-12 && untouched && monotone &&
              once.sensitive == std::set<std::string>{"c1"},
          "green [" + fmt(g1.lo) + "," + fmt(g1.hi) + "], width after two=" + fmt(w2) +
              (untouched ? ", c2 unchanged" : ", c2 CHANGED") +
              (monotone ? ", colors monotone" : ", colors NOT monotone")};
}

Outcome cli_determinism() {
  const auto a = testing::scratch_dir("acceptance_a");
  const auto b = testing::scratch_dir("acceptance_b");
  const std::string data = "--dataset \"" + testing::fixture_path("fixture.jsonl") + "\"";
  const int ra = testing::run_cli("analyze " + data + " --out \"" + a + "\"", a + "/log");
  const int rb = testing::run_cli("analyze " + data + " --out \"" + b + "\"", b + "/log");
  if (ra != 0 || rb != 0) return {false, "analyze exited " + std::to_string(ra) + "/" + std::to_string(rb)};
  const bool json = read_file(a + "/report.json") == read_file(b + "/report.json");
  const bool csv = read_file(a + "/report.csv") == read_file(b + "/report.csv");
  std::filesystem::remove_all(a);
  std::filesystem::remove_all(b);
  return {json && csv, std::string("report.json ") + (json ? "identical" : "DIFFERS") +
                           ", report.csv " + (csv ? "identical" : "DIFFERS")};
}

}  // namespace

int main() {
  const auto start = Clock::now();
  struct Criterion {
    const char* name;
    Outcome (*check)();
  };
  const Criterion criteria[] = {
      {"c1 cold-start anchor", c1_cold_start_anchor},
      {"c2 word-frequency anchor", c2_anchor},
      {"c5 overlap anchors", c5_overlap_anchor},
      {"cold-start overrides", cold_start_overrides},
      {"oracle equivalence", oracle_equivalence},
      {"impact algebra", impact_algebra},
      {"split invariants", split_invariants},
      {"partition-comparison ordering", partition_ordering},
      {"autofix contract", autofix_contract},
      {"retune arithmetic", retune_arithmetic},
      {"CLI determinism", cli_determinism},
  };
  std::vector<std::pair<const char*, Outcome>> results;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    results.emplace_back(c.name, o);
  }
  const double total_s = millis(Clock::now() - start) / 1000.0;
  int failed = 0;
  for (auto& [name, o] : results) {
    if (std::string(name) == "oracle equivalence") {
      o.pass = o.pass && total_s < 60.0;
      o.detail += ", full suite " + fmt(total_s) + "s";
    }
    failed += !o.pass;
    std::printf("%s  %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(results.size()) - failed, results.size());
  return failed == 0 ? 0 : 1;
}
