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

#include "dqi/splitkit.hpp"

#include <algorithm>
#include <array>
#include <boost/pending/disjoint_sets.hpp>
#include <cmath>
#include <sstream>

#include "dqi/config.hpp"
#include "dqi/error.hpp"

namespace dqi {

namespace {

constexpr Split kAssignable[] = {Split::kTrain, Split::kDev, Split::kTest};

// Largest-remainder rounding so the targets sum to n.
std::map<Split, long> split_targets(std::size_t n, const SplitRatios& r) {
  const double total = r.train + r.dev + r.test;
  const double shares[] = {r.train / total, r.dev / total, r.test / total};
  long assigned = 0;
  std::map<Split, long> out;
  std::vector<std::pair<double, int>> remainders;
  for (int i = 0; i < 3; ++i) {
    const double exact = shares[i] * static_cast<double>(n);
    const long base = static_cast<long>(std::floor(exact));
    out[kAssignable[i]] = base;
    assigned += base;
    remainders.emplace_back(exact - static_cast<double>(base), i);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (long k = 0; k < static_cast<long>(n) - assigned; ++k)
    ++out[kAssignable[remainders[static_cast<std::size_t>(k)].second]];
  return out;
}

std::string premise_key(const Sample& s) { return join(tokenize(s.premise)); }

void add_rows(std::vector<WinnerRow>& rows, const ComponentReport& good,
              const ComponentReport& bad) {
  const std::string comp(to_string(good.component));
  const auto push = [&](std::string gran, std::string term, double g, double b) {
    std::string winner = g > b ? "good" : (b > g ? "bad" : "tie");
    rows.push_back({comp, std::move(gran), std::move(term), g, b, std::move(winner)});
  };
  push("", "value", good.value, bad.value);
  std::set<std::string> term_keys;
  for (const auto& [k, v] : good.terms) term_keys.insert(k);
  for (const auto& [k, v] : bad.terms) term_keys.insert(k);
  for (const auto& k : term_keys) {
    const auto g = good.terms.find(k);
    const auto b = bad.terms.find(k);
    push("", k, g == good.terms.end() ? 0.0 : g->second,
         b == bad.terms.end() ? 0.0 : b->second);
  }
  std::set<std::string> gran_keys;
  for (const auto& [k, v] : good.granularities) gran_keys.insert(k);
  for (const auto& [k, v] : bad.granularities) gran_keys.insert(k);
  for (const auto& k : gran_keys) {
    const auto g = good.granularities.find(k);
    const auto b = bad.granularities.find(k);
    const GranularityTerms gt = g == good.granularities.end() ? GranularityTerms{} : g->second;
    const GranularityTerms bt = b == bad.granularities.end() ? GranularityTerms{} : b->second;
    push(k, "T1", gt.t1, bt.t1);
    push(k, "T2", gt.t2, bt.t2);
  }
}

// Group-to-split assignment. The score is the total size excess beyond the
// tolerance, then the total absolute deviation from the targets.
class Packing {
 public:
  Packing(const std::vector<std::vector<std::size_t>>& groups,
          const std::map<Split, long>& targets, long tolerance)
      : slot_(groups.size(), -1), tolerance_(tolerance) {
    for (std::size_t g = 0; g < groups.size(); ++g)
      weight_.push_back(static_cast<long>(groups[g].size()));
    for (int k = 0; k < 3; ++k) target_[k] = targets.at(kAssignable[k]);
  }

  void place(std::size_t g, int k) {
    if (slot_[g] >= 0) size_[slot_[g]] -= weight_[g];
    slot_[g] = k;
    size_[k] += weight_[g];
  }
  int slot(std::size_t g) const { return slot_[g]; }
  long size(Split s) const { return size_[index_of(s)]; }
  long weight(std::size_t g) const { return weight_[g]; }
  long deficit(int k) const { return target_[k] - size_[k]; }
  bool fits(std::size_t g, int k) const {
    return size_[k] + weight_[g] <= target_[k] + tolerance_;
  }

  std::pair<long, long> score() const {
    long excess = 0, deviation = 0;
    for (int k = 0; k < 3; ++k) {
      const long d = std::abs(size_[k] - target_[k]);
      excess += std::max(0L, d - tolerance_);
      deviation += d;
    }
    return {excess, deviation};
  }

  // Single moves first, then pairwise swaps, until nothing improves.
  void repair() {
    const std::size_t n = slot_.size();
    for (std::size_t round = 0; round < 4 * n + 8 && score().first > 0; ++round)
      if (!improve_by_move() && !(n <= 2000 && improve_by_swap())) break;
  }

 private:
  static int index_of(Split s) {
    for (int k = 0; k < 3; ++k)
      if (kAssignable[k] == s) return k;
    return 0;
  }

  bool improve_by_move() {
    const auto base = score();
    for (std::size_t g = 0; g < slot_.size(); ++g) {
      const int from = slot_[g];
      for (int k = 0; k < 3; ++k) {
        if (k == from) continue;
        place(g, k);
        if (score() < base) return true;
        place(g, from);
      }
    }
    return false;
  }

  bool improve_by_swap() {
    const auto base = score();
    for (std::size_t a = 0; a < slot_.size(); ++a)
      for (std::size_t b = a + 1; b < slot_.size(); ++b) {
        const int ka = slot_[a], kb = slot_[b];
        if (ka == kb || weight_[a] == weight_[b]) continue;
        place(a, kb);
        place(b, ka);
        if (score() < base) return true;
        place(a, ka);
        place(b, kb);
      }
    return false;
  }

  std::vector<int> slot_;
  std::vector<long> weight_;
  std::array<long, 3> target_{};
  std::array<long, 3> size_{};
  long tolerance_;
};

// Random split among those with room, weighted by their remaining deficit.
int pick_split(const Packing& pack, std::size_t g, std::mt19937_64& rng) {
  std::array<long, 3> weight{};
  long total = 0;
  for (int k = 0; k < 3; ++k)
    if (pack.fits(g, k) && pack.deficit(k) > 0) total += weight[k] = pack.deficit(k);
  if (total > 0) {
    auto r = static_cast<long>(uniform_below(rng, static_cast<std::uint64_t>(total)));
    for (int k = 0; k < 3; ++k) {
      if (r < weight[k]) return k;
      r -= weight[k];
    }
  }
  int best = 0;
  for (int k = 1; k < 3; ++k)
    if (pack.deficit(k) > pack.deficit(best)) best = k;
  return best;
}

}  // namespace

long split_tolerance(std::size_t dataset_size) {
  return std::max(5L, static_cast<long>(std::ceil(0.02 * static_cast<double>(dataset_size))));
}

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  // Rejection sampling keeps the draw unbiased and engine-defined.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

std::vector<std::vector<std::size_t>> constraint_groups(const Dataset& dataset) {
  const std::size_t n = dataset.size();
  std::vector<std::size_t> rank(n), parent(n);
  boost::disjoint_sets<std::size_t*, std::size_t*> sets(rank.data(), parent.data());
  for (std::size_t i = 0; i < n; ++i) sets.make_set(i);
  std::map<std::string, std::size_t> first_by_annotator, first_by_premise;
  const auto samples = dataset.samples();
  for (std::size_t i = 0; i < n; ++i) {
    const Sample& s = samples[i];
    if (s.annotator_id && !s.annotator_id->empty()) {
      auto [it, fresh] = first_by_annotator.emplace(*s.annotator_id, i);
      if (!fresh) sets.union_set(it->second, i);
    }
    auto [it, fresh] = first_by_premise.emplace(premise_key(s), i);
    if (!fresh) sets.union_set(it->second, i);
  }
  std::map<std::size_t, std::size_t> group_of_root;
  std::vector<std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t root = sets.find_set(i);
    auto [it, fresh] = group_of_root.emplace(root, groups.size());
    if (fresh) groups.emplace_back();
    groups[it->second].push_back(i);
  }
  return groups;
}

SplitAssignment randomize_split(const Dataset& dataset, std::uint64_t seed,
                                const SplitRatios& ratios) {
  if (dataset.empty()) throw Error(ErrorCode::kEmptyDataset, "nothing to split");
  if (!(ratios.train >= 0 && ratios.dev >= 0 && ratios.test >= 0) ||
      !(ratios.train + ratios.dev + ratios.test > 0))
    throw Error(ErrorCode::kInvalidParams, "split ratios must be non-negative");
  const std::size_t n = dataset.size();
  SplitAssignment out;
  out.seed = seed;
  out.targets = split_targets(n, ratios);
  out.tolerance = split_tolerance(n);

  auto groups = constraint_groups(dataset);
  long largest_capacity = 0;
  for (const auto s : kAssignable)
    largest_capacity = std::max(largest_capacity, out.targets[s] + out.tolerance);
  for (const auto& g : groups)
    if (static_cast<long>(g.size()) > largest_capacity)
      throw Error(ErrorCode::kUnsatisfiableConstraints,
                  "a group of " + std::to_string(g.size()) +
                      " samples sharing annotators or premises exceeds the largest "
                      "split capacity of " + std::to_string(largest_capacity));

  std::mt19937_64 rng(seed);
  for (std::size_t i = groups.size(); i > 1; --i)
    std::swap(groups[i - 1], groups[uniform_below(rng, i)]);
  std::stable_sort(groups.begin(), groups.end(),
                   [](const auto& a, const auto& b) { return a.size() > b.size(); });

  Packing pack(groups, out.targets, out.tolerance);
  for (std::size_t g = 0; g < groups.size(); ++g) pack.place(g, pick_split(pack, g, rng));
  pack.repair();

  for (const auto s : kAssignable) out.sizes[s] = pack.size(s);
  const auto samples = dataset.samples();
  for (std::size_t g = 0; g < groups.size(); ++g)
    for (const auto i : groups[g]) out.tags[samples[i].id] = kAssignable[pack.slot(g)];

  out.within_tolerance = true;
  for (const auto s : kAssignable) {
    out.achieved_ratios[s] = static_cast<double>(out.sizes[s]) / static_cast<double>(n);
    if (std::abs(out.sizes[s] - out.targets[s]) > out.tolerance) out.within_tolerance = false;
  }
  std::tie(out.annotator_disjoint, out.premise_grouped) =
      check_split_constraints(dataset, out.tags);
  return out;
}

std::pair<bool, bool> check_split_constraints(const Dataset& dataset,
                                              const std::map<std::string, Split>& tags) {
  std::map<std::string, Split> by_annotator, by_premise;
  bool annotators = true, premises = true;
  for (const auto& s : dataset.samples()) {
    const auto tag = tags.find(s.id);
    const Split split = tag == tags.end() ? s.split : tag->second;
    if (s.annotator_id && !s.annotator_id->empty()) {
      auto [it, fresh] = by_annotator.emplace(*s.annotator_id, split);
      if (!fresh && it->second != split) annotators = false;
    }
    auto [it, fresh] = by_premise.emplace(premise_key(s), split);
    if (!fresh && it->second != split) premises = false;
  }
  return {annotators, premises};
}

std::string split_csv(const Dataset& dataset, const SplitAssignment& assignment) {
  std::ostringstream out;
  out << "id,split\n";
  for (const auto& s : dataset.samples()) {
    const auto it = assignment.tags.find(s.id);
    out << s.id << "," << to_string(it == assignment.tags.end() ? s.split : it->second)
        << "\n";
  }
  return out.str();
}

const WinnerRow& PartitionComparison::row(std::string_view component,
                                          std::string_view granularity,
                                          std::string_view term) const {
  for (const auto& r : rows)
    if (r.component == component && r.granularity == granularity && r.term == term) return r;
  throw Error(ErrorCode::kInvalidParams, "no comparison row for " + std::string(component) +
                                             "/" + std::string(granularity) + "/" +
                                             std::string(term));
}

PartitionComparison compare_partitions(const Dataset& dataset,
                                       const PartitionMembership& membership,
                                       const SimilarityProvider& provider,
                                       const HyperParams& params) {
  const auto side = [&](Partition p) {
    return dataset.filter([&](const Sample& s) {
      const auto it = membership.find(s.id);
      if (it == membership.end())
        throw Error(ErrorCode::kMissingId, "no partition for '" + s.id + "'");
      return it->second == p;
    });
  };
  const Dataset good = side(Partition::kGood);
  const Dataset bad = side(Partition::kBad);
  if (good.empty()) throw Error(ErrorCode::kEmptySide, "good partition is empty");
  if (bad.empty()) throw Error(ErrorCode::kEmptySide, "bad partition is empty");
  PartitionComparison out;
  out.good = compute_all(good, provider, params);
  out.bad = compute_all(bad, provider, params);
  out.good_size = good.size();
  out.bad_size = bad.size();
  for (const auto c : kAllComponents) add_rows(out.rows, out.good.at(c), out.bad.at(c));
  return out;
}

std::string comparison_csv(const PartitionComparison& comparison) {
  std::ostringstream out;
  out << "component,granularity,term,good,bad,winner\n";
  for (const auto& r : comparison.rows)
    out << r.component << "," << r.granularity << "," << r.term << ","
        << format_number(r.good) << "," << format_number(r.bad) << "," << r.winner << "\n";
  return out.str();
}

SampleValues per_sample_values(const Dataset& dataset, const SimilarityProvider& provider,
                               const HyperParams& params) {
  SampleValues out;
  for (const auto& s : dataset.samples()) {
    const Dataset rest = dataset.filter([&](const Sample& o) { return o.id != s.id; });
    out[s.id] = draft_flag_values(rest, s, provider, params);
  }
  return out;
}

RetuneResult retune_from_errors(const std::set<std::string>& error_ids,
                                const SampleValues& values, const BandSpec& bands,
                                double margin, double factor) {
  if (error_ids.empty()) throw Error(ErrorCode::kNoErrors, "error set is empty");
  for (const auto& id : error_ids)
    if (!values.count(id)) throw Error(ErrorCode::kUnknownId, "'" + id + "'");
  RetuneResult out;
  std::map<std::string, std::pair<long, long>> all, errors;  // green, total
  for (const auto& [id, vals] : values) {
    const bool is_error = error_ids.count(id) > 0;
    for (const auto& [key, v] : vals) {
      if (!bands.contains(key)) continue;
      const bool green = bands.at(key).color(v) == FlagColor::kGreen;
      auto& a = all[key];
      a.first += green;
      ++a.second;
      if (is_error) {
        auto& e = errors[key];
        e.first += green;
        ++e.second;
      }
    }
  }
  for (const auto& [key, counts] : errors) {
    const double err = static_cast<double>(counts.first) / static_cast<double>(counts.second);
    const auto& a = all.at(key);
    const double overall = static_cast<double>(a.first) / static_cast<double>(a.second);
    out.error_green_fraction[key] = err;
    out.overall_green_fraction[key] = overall;
    if (err - overall >= margin - 1e-12) out.sensitive.insert(key);
  }
  out.bands = shrink_green(bands, out.sensitive, factor);
  return out;
}

}  // namespace dqi
