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

// Shared test helpers: seeded corpus generators, fixture paths and an
// independent brute-force implementation of the component formulas.

#ifndef DQI_TESTS_SUPPORT_HPP_
#define DQI_TESTS_SUPPORT_HPP_

#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "dqi/corpus.hpp"
#include "dqi/engine.hpp"
#include "dqi/error.hpp"

namespace dqi::testing {

std::string fixture_path(const std::string& name);
Dataset fixture();

struct CorpusShape {
  std::size_t min_samples = 1;
  std::size_t max_samples = 20;
  double shared_premise_rate = 0.3;
  std::size_t annotators = 5;
  bool with_splits = true;
};

/// Random corpus drawn from a small English vocabulary; deterministic per seed.
Dataset random_corpus(std::uint64_t seed, const CorpusShape& shape = {});

/// Corpus of `annotators` writers with 3-6 samples each. Writers often
/// reuse their own premises and occasionally borrow another writer's.
Dataset annotated_corpus(std::uint64_t seed, std::size_t annotators);

/// 40 samples: 20 "good" ones with varied wording and 20 "bad" ones whose
/// hypotheses nearly copy a small pool of premises.
std::pair<Dataset, PartitionMembership> partition_fixture();

Sample make_sample(std::string id, std::string premise, std::string hypothesis,
                   Label label = Label::kNeutral, Split split = Split::kUnassigned,
                   std::optional<std::string> annotator = std::nullopt);

/// Twenty drafts whose hypotheses mostly repeat their premise, so each
/// starts with a red overlap flag.
std::vector<Sample> red_autofix_suite();

/// Runs the dqi binary with `args`, sending stdout and stderr to `log`.
/// Returns the exit status.
int run_cli(const std::string& args, const std::string& log);
/// Fresh empty directory under the system temp directory.
std::string scratch_dir(const std::string& name);

/// Code of the dqi::Error thrown by `fn`; std::logic_error when none is.
ErrorCode code_of(const std::function<void()>& fn);

/// Relative comparison used by the oracle checks.
bool close(double a, double b, double rel = 1e-9);

namespace oracle {

/// Sentence cosine over TF-IDF weights with document frequencies counted
/// over `corpus`, dense and direct.
double sentence_similarity(const std::vector<std::string>& a,
                           const std::vector<std::string>& b,
                           const std::vector<std::vector<std::string>>& corpus);
/// Character-trigram Jaccard of '#'-padded words; 1 for identical words.
double word_similarity(const std::string& a, const std::string& b);
double stddev(const std::vector<double>& v);

/// Component values and their named terms ("c1", "c1.T1", ...), computed
/// straight from the formulas with no shared engine code beyond
/// tokenization, stop words and POS tags.
std::map<std::string, double> evaluate(const Dataset& dataset, const HyperParams& params);

}  // namespace oracle

}  // namespace dqi::testing

#endif  // DQI_TESTS_SUPPORT_HPP_
