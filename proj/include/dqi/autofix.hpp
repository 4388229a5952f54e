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

#ifndef DQI_AUTOFIX_HPP_
#define DQI_AUTOFIX_HPP_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dqi/bands.hpp"
#include "dqi/corpus.hpp"
#include "dqi/engine.hpp"

namespace dqi {

/// word -> ordered single-token replacement candidates.
class SynonymLexicon {
 public:
  SynonymLexicon() = default;

  /// Lines of `word<TAB>cand1,cand2,...`; '#' starts a comment line.
  /// Throws kBadConfig on a candidate that equals its key or is not a
  /// single token.
  static SynonymLexicon parse(std::string_view text);
  static SynonymLexicon load(const std::filesystem::path& path);
  static const SynonymLexicon& bundled();

  const std::vector<std::string>& candidates(std::string_view word) const;
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

 private:
  std::map<std::string, std::vector<std::string>, std::less<>> entries_;
};

struct FixEdit {
  std::size_t position = 0;  // token index in the hypothesis
  std::string old_word;
  std::string new_word;
  std::map<std::string, FlagColor> colors;  // after the edit
};

enum class FixStatus { kAllGreen, kImproved, kNoFixFound };
std::string_view to_string(FixStatus status);

struct FixTrace {
  std::string original_hypothesis;
  std::map<std::string, FlagColor> initial_colors;
  std::vector<FixEdit> edits;
  FixStatus status = FixStatus::kNoFixFound;
};

struct RankedToken {
  std::size_t position = 0;
  std::string token;
  double importance = 0.0;
};

/// Content tokens of the hypothesis ordered by how much deleting each one
/// moves the non-green flags toward green. Descending, ties by position.
/// Throws kNoContentTokens.
std::vector<RankedToken> rank_importance(const Sample& sample, const Dataset& dataset,
                                         const SimilarityProvider& provider,
                                         const HyperParams& params,
                                         const BandSpec& bands);

/// Normalized distance from `value` to the green interval; 0 when green.
double distance_to_green(const Band& band, double value);

/// Replaces token `position` of `text` with `word`, keeping the original
/// capitalization of its first letter.
std::string replace_token(std::string_view text, std::size_t position,
                          std::string_view word);
/// Replays trace edits onto `hypothesis`.
std::string apply_edits(std::string_view hypothesis, const std::vector<FixEdit>& edits);

/// Greedy synonym substitution in importance order. An edit is kept only if
/// it strictly lowers (reds, yellows). Stops at all-green, after `max_edits`
/// edits (default: hypothesis content length) or when positions run out.
/// Numbers and capitalized mid-sentence tokens are never replaced.
/// Throws kEmptyLexicon, kNoContentTokens, kInvalidParams.
std::pair<Sample, FixTrace> autofix(const Sample& sample, const Dataset& dataset,
                                    const SimilarityProvider& provider,
                                    const HyperParams& params, const BandSpec& bands,
                                    const SynonymLexicon& lexicon,
                                    std::optional<int> max_edits = std::nullopt);

}  // namespace dqi

#endif  // DQI_AUTOFIX_HPP_
