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

#include "dqi/autofix.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "dqi/bundled.hpp"
#include "dqi/error.hpp"

namespace dqi {

namespace {

using Colors = std::map<std::string, FlagColor>;

std::pair<int, int> badness(const Colors& colors) {
  int reds = 0, yellows = 0;
  for (const auto& [k, c] : colors) {
    reds += c == FlagColor::kRed;
    yellows += c == FlagColor::kYellow;
  }
  return {reds, yellows};
}

bool all_green(const Colors& colors) {
  return std::all_of(colors.begin(), colors.end(),
                     [](const auto& kv) { return kv.second == FlagColor::kGreen; });
}

bool has_digit(std::string_view s) {
  return std::any_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

std::string trim_copy(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

// Deleting a token also drops one adjoining space.
std::string delete_span(std::string_view text, const TokenSpan& span) {
  std::size_t begin = span.begin;
  std::size_t end = span.end;
  if (end < text.size() && text[end] == ' ')
    ++end;
  else if (begin > 0 && text[begin - 1] == ' ')
    --begin;
  std::string out(text.substr(0, begin));
  out.append(text.substr(end));
  return out;
}

class Evaluator {
 public:
  Evaluator(const Dataset& dataset, const SimilarityProvider& provider,
            const HyperParams& params, const BandSpec& bands)
      : dataset_(dataset), provider_(provider), params_(params), bands_(bands) {
    if (!dataset.empty()) baseline_ = compute_all(dataset, provider, params);
  }

  std::map<std::string, double> values(const Sample& s) const {
    return draft_flag_values(dataset_, s, provider_, params_,
                             dataset_.empty() ? nullptr : &baseline_);
  }
  Colors colors(const Sample& s) const { return assign_colors(values(s), bands_).colors; }
  const BandSpec& bands() const { return bands_; }

 private:
  const Dataset& dataset_;
  const SimilarityProvider& provider_;
  const HyperParams& params_;
  const BandSpec& bands_;
  DqiReport baseline_;
};

double total_distance(const std::map<std::string, double>& values,
                      const std::map<std::string, double>& reference,
                      const BandSpec& bands) {
  double sum = 0.0;
  for (const auto& [key, v] : values) {
    const Band& b = bands.at(key);
    if (b.color(reference.at(key)) != FlagColor::kGreen) sum += distance_to_green(b, v);
  }
  return sum;
}

std::vector<RankedToken> rank_with(const Sample& sample, const Evaluator& eval) {
  const auto spans = tokenize_spans(sample.hypothesis);
  const auto& res = TextResources::bundled();
  std::vector<RankedToken> ranked;
  for (std::size_t i = 0; i < spans.size(); ++i)
    if (!res.is_stop_word(spans[i].token)) ranked.push_back({i, spans[i].token, 0.0});
  if (ranked.empty())
    throw Error(ErrorCode::kNoContentTokens,
                "hypothesis of '" + sample.id + "' has no content tokens");
  const auto base = eval.values(sample);
  const double base_distance = total_distance(base, base, eval.bands());
  if (base_distance == 0.0) return ranked;
  for (auto& r : ranked) {
    Sample trial = sample;
    trial.hypothesis = delete_span(sample.hypothesis, spans[r.position]);
    if (trim_copy(trial.hypothesis).empty()) trial.hypothesis = sample.hypothesis;
    r.importance = base_distance - total_distance(eval.values(trial), base, eval.bands());
  }
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    return a.importance > b.importance;
  });
  return ranked;
}

}  // namespace

SynonymLexicon SynonymLexicon::parse(std::string_view text) {
  SynonymLexicon lex;
  std::size_t pos = 0;
  int line_no = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    const std::string line = trim_copy(text.substr(pos, eol - pos));
    pos = eol + 1;
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw Error(ErrorCode::kBadConfig, "lexicon line " + std::to_string(line_no) +
                                             ": expected word<TAB>candidates");
    const std::string key = trim_copy(std::string_view(line).substr(0, tab));
    auto& list = lex.entries_[key];
    std::string_view rest = std::string_view(line).substr(tab + 1);
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      const std::string cand = trim_copy(rest.substr(0, comma));
      rest = comma == std::string_view::npos ? std::string_view() : rest.substr(comma + 1);
      if (cand.empty()) continue;
      const auto toks = tokenize(cand);
      if (toks.size() != 1 || toks[0] != cand)
        throw Error(ErrorCode::kBadConfig, "lexicon line " + std::to_string(line_no) +
                                               ": '" + cand + "' is not a single token");
      if (cand == key)
        throw Error(ErrorCode::kBadConfig, "lexicon line " + std::to_string(line_no) +
                                               ": '" + key + "' lists itself");
      if (std::find(list.begin(), list.end(), cand) == list.end()) list.push_back(cand);
    }
  }
  return lex;
}

SynonymLexicon SynonymLexicon::load(const std::filesystem::path& path) {
  return parse(read_file(path));
}

const SynonymLexicon& SynonymLexicon::bundled() {
  static const SynonymLexicon lex = parse(bundled::kSynonyms);
  return lex;
}

const std::vector<std::string>& SynonymLexicon::candidates(std::string_view word) const {
  static const std::vector<std::string> none;
  const auto it = entries_.find(word);
  return it == entries_.end() ? none : it->second;
}

std::string_view to_string(FixStatus status) {
  switch (status) {
    case FixStatus::kAllGreen: return "all_green";
    case FixStatus::kImproved: return "improved";
    case FixStatus::kNoFixFound: return "no_fix_found";
  }
  return "no_fix_found";
}

double distance_to_green(const Band& band, double value) {
  const Interval& g = band.green;
  if (g.contains(value)) return 0.0;
  const double edge = value < g.lo ? g.lo : g.hi;
  double scale = std::isfinite(g.width()) ? g.width() : 0.0;
  if (scale <= 0.0) scale = std::max(std::abs(edge), 1.0);
  return std::abs(value - edge) / scale;
}

std::string replace_token(std::string_view text, std::size_t position,
                          std::string_view word) {
  const auto spans = tokenize_spans(text);
  if (position >= spans.size())
    throw Error(ErrorCode::kInvalidParams, "token position out of range");
  const auto& span = spans[position];
  std::string repl(word);
  if (!repl.empty() && std::isupper(static_cast<unsigned char>(text[span.begin])))
    repl[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(repl[0])));
  std::string out(text.substr(0, span.begin));
  out += repl;
  out.append(text.substr(span.end));
  return out;
}

std::string apply_edits(std::string_view hypothesis, const std::vector<FixEdit>& edits) {
  std::string out(hypothesis);
  for (const auto& e : edits) out = replace_token(out, e.position, e.new_word);
  return out;
}

std::vector<RankedToken> rank_importance(const Sample& sample, const Dataset& dataset,
                                         const SimilarityProvider& provider,
                                         const HyperParams& params,
                                         const BandSpec& bands) {
  return rank_with(sample, Evaluator(dataset, provider, params, bands));
}

std::pair<Sample, FixTrace> autofix(const Sample& sample, const Dataset& dataset,
                                    const SimilarityProvider& provider,
                                    const HyperParams& params, const BandSpec& bands,
                                    const SynonymLexicon& lexicon,
                                    std::optional<int> max_edits) {
  if (max_edits && *max_edits < 1)
    throw Error(ErrorCode::kInvalidParams, "max_edits must be at least 1");
  const Evaluator eval(dataset, provider, params, bands);
  FixTrace trace;
  trace.original_hypothesis = sample.hypothesis;
  trace.initial_colors = eval.colors(sample);
  if (all_green(trace.initial_colors)) {
    trace.status = FixStatus::kAllGreen;
    return {sample, trace};
  }
  if (lexicon.empty()) throw Error(ErrorCode::kEmptyLexicon, "lexicon has no entries");
  const auto ranked = rank_with(sample, eval);
  const int limit = max_edits.value_or(
      static_cast<int>(content_tokens(tokenize(sample.hypothesis)).size()));

  Sample current = sample;
  Colors colors = trace.initial_colors;
  const auto original_spans = tokenize_spans(sample.hypothesis);
  for (const auto& r : ranked) {
    if (static_cast<int>(trace.edits.size()) >= limit || all_green(colors)) break;
    const auto& span = original_spans[r.position];
    const bool capitalized =
        std::isupper(static_cast<unsigned char>(sample.hypothesis[span.begin]));
    if (has_digit(r.token) || (capitalized && r.position > 0)) continue;
    for (const auto& cand : lexicon.candidates(r.token)) {
      Sample trial = current;
      trial.hypothesis = replace_token(current.hypothesis, r.position, cand);
      Colors next = eval.colors(trial);
      if (badness(next) < badness(colors)) {
        trace.edits.push_back({r.position, r.token, cand, next});
        current = std::move(trial);
        colors = std::move(next);
        break;
      }
    }
  }
  if (all_green(colors))
    trace.status = FixStatus::kAllGreen;
  else
    trace.status = trace.edits.empty() ? FixStatus::kNoFixFound : FixStatus::kImproved;
  return {current, trace};
}

}  // namespace dqi
