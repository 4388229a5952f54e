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

#ifndef DQI_SPLITKIT_HPP_
#define DQI_SPLITKIT_HPP_

#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "dqi/bands.hpp"
#include "dqi/corpus.hpp"
#include "dqi/engine.hpp"

namespace dqi {

struct SplitRatios {
  double train = 0.7;
  double dev = 0.1;
  double test = 0.2;
};

struct SplitAssignment {
  std::map<std::string, Split> tags;
  std::uint64_t seed = 0;
  bool annotator_disjoint = false;
  bool premise_grouped = false;
  std::map<Split, long> sizes;
  std::map<Split, long> targets;
  std::map<Split, double> achieved_ratios;
  long tolerance = 0;
  bool within_tolerance = false;
};

/// Allowed deviation from a target split size: 5 samples or 2%, whichever
/// is larger.
long split_tolerance(std::size_t dataset_size);

/// Uniform integer in [0, bound) from raw engine output, identical on every
/// platform.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound);

/// Samples sharing an annotator or a premise, as sorted index lists ordered
/// by their first member.
std::vector<std::vector<std::size_t>> constraint_groups(const Dataset& dataset);

/// Throws kEmptyDataset, kInvalidParams, kUnsatisfiableConstraints.
SplitAssignment randomize_split(const Dataset& dataset, std::uint64_t seed,
                                const SplitRatios& ratios = {});

/// Re-checks annotator disjointness and premise grouping of `tags`.
std::pair<bool, bool> check_split_constraints(const Dataset& dataset,
                                              const std::map<std::string, Split>& tags);

/// `id,split` lines in dataset order.
std::string split_csv(const Dataset& dataset, const SplitAssignment& assignment);

struct WinnerRow {
  std::string component;
  std::string granularity;  // empty for scalar terms
  std::string term;
  double good = 0.0;
  double bad = 0.0;
  std::string winner;  // "good", "bad" or "tie"; the higher value wins
};

struct PartitionComparison {
  DqiReport good;
  DqiReport bad;
  std::size_t good_size = 0;
  std::size_t bad_size = 0;
  std::vector<WinnerRow> rows;

  /// Row for (component, granularity, term); throws kInvalidParams.
  const WinnerRow& row(std::string_view component, std::string_view granularity,
                       std::string_view term) const;
};

/// Throws kEmptySide.
PartitionComparison compare_partitions(const Dataset& dataset,
                                       const PartitionMembership& membership,
                                       const SimilarityProvider& provider,
                                       const HyperParams& params);

std::string comparison_csv(const PartitionComparison& comparison);

/// Flag values per sample id, as draft_flag_values of each sample against the
/// rest of the dataset.
using SampleValues = std::map<std::string, std::map<std::string, double>>;
SampleValues per_sample_values(const Dataset& dataset, const SimilarityProvider& provider,
                               const HyperParams& params);

struct RetuneResult {
  std::set<std::string> sensitive;
  std::map<std::string, double> error_green_fraction;
  std::map<std::string, double> overall_green_fraction;
  BandSpec bands;
};

inline constexpr double kDefaultSensitivityMargin = 0.20;
inline constexpr double kDefaultShrinkFactor = 0.2;

/// A band key is sensitive when its green fraction over the error samples
/// exceeds its green fraction over all samples by at least `margin`.
/// Throws kNoErrors, kUnknownId.
RetuneResult retune_from_errors(const std::set<std::string>& error_ids,
                                const SampleValues& values, const BandSpec& bands,
                                double margin = kDefaultSensitivityMargin,
                                double factor = kDefaultShrinkFactor);

}  // namespace dqi

#endif  // DQI_SPLITKIT_HPP_
