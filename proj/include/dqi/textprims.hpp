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

#ifndef DQI_TEXTPRIMS_HPP_
#define DQI_TEXTPRIMS_HPP_

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace dqi {

class Dataset;

/// Lowercase word tokens of one sentence.
using TokenSeq = std::vector<std::string>;

struct TokenSpan {
  std::string token;
  std::size_t begin = 0;  // byte offsets into the source text
  std::size_t end = 0;
};

/// Lowercases and splits on anything that is not a letter, digit or
/// apostrophe. Typographic apostrophes are folded to '\''; leading and
/// trailing apostrophes are dropped. Non-ASCII letters are kept verbatim.
TokenSeq tokenize(std::string_view text);
std::vector<TokenSpan> tokenize_spans(std::string_view text);

enum class PosTag { kNoun, kVerb, kAdjective, kAdverb, kOther };
std::string_view to_string(PosTag tag);
std::optional<PosTag> parse_pos_tag(std::string_view text);

struct TaggedToken {
  std::string token;
  PosTag tag = PosTag::kOther;

  bool operator==(const TaggedToken&) const = default;
};

/// Stop-word list and POS lexicon, each carrying a version string that is
/// echoed into reports.
class TextResources {
 public:
  /// Resources compiled into the library from data/.
  static const TextResources& bundled();
  static TextResources parse(std::string_view stopwords,
                             std::string_view pos_lexicon,
                             std::string stopword_version,
                             std::string tagger_version);
  static TextResources from_files(const std::filesystem::path& stopwords,
                                  const std::filesystem::path& pos_lexicon);

  bool is_stop_word(std::string_view token) const;
  std::optional<PosTag> lexicon_tag(std::string_view token) const;
  std::size_t stop_word_count() const { return stopwords_.size(); }

  const std::string& stopword_version() const { return stopword_version_; }
  const std::string& tagger_version() const { return tagger_version_; }

 private:
  std::set<std::string, std::less<>> stopwords_;
  std::map<std::string, PosTag, std::less<>> lexicon_;
  std::string stopword_version_;
  std::string tagger_version_;
};

TokenSeq content_tokens(const TokenSeq& tokens,
                        const TextResources& res = TextResources::bundled());

PosTag tag_word(std::string_view token,
                const TextResources& res = TextResources::bundled());
std::vector<TaggedToken> pos_tag(
    const TokenSeq& tokens, const TextResources& res = TextResources::bundled());

/// Contiguous n-grams (n in {2,3}) joined by a single space. Throws kBadN.
std::vector<std::string> ngrams(const TokenSeq& tokens, int n);

/// Document frequencies over every sentence of a corpus; feeds the
/// inverse-document-frequency weights of sentence_similarity.
class CorpusStats {
 public:
  CorpusStats() = default;
  explicit CorpusStats(const std::vector<TokenSeq>& sentences);
  /// Both sentences of every sample.
  static CorpusStats from_dataset(const Dataset& dataset);

  /// ln((1 + N) / (1 + df)) + 1; strictly positive, also for unseen tokens.
  double idf(std::string_view token) const;
  std::size_t sentence_count() const { return sentence_count_; }

 private:
  std::map<std::string, std::size_t, std::less<>> document_frequency_;
  std::size_t sentence_count_ = 0;
};

/// Sparse TF-IDF rows of a fixed sentence collection, queried in blocks so
/// all-pairs similarity never needs the full dense matrix at once.
class SentenceIndex {
 public:
  SentenceIndex(const std::vector<TokenSeq>& sentences, const CorpusStats& stats);

  Eigen::Index size() const { return rows_.rows(); }
  /// Cosine similarity of each query (row) against every indexed sentence.
  Eigen::MatrixXd query(const std::vector<TokenSeq>& queries) const;
  /// Similarity of indexed sentences [first, first + count) against all;
  /// the self-similarity of a non-empty sentence is exactly 1.
  Eigen::MatrixXd block(Eigen::Index first, Eigen::Index count) const;

 private:
  using SparseRows = Eigen::SparseMatrix<double, Eigen::RowMajor>;

  SparseRows encode(const std::vector<TokenSeq>& sentences,
                    Eigen::VectorXd& squared_norms) const;

  CorpusStats stats_;
  std::map<std::string, Eigen::Index, std::less<>> vocabulary_;
  SparseRows rows_;
  Eigen::VectorXd squared_norms_;
};

/// Word and sentence similarity. Word similarity comes from a word-vector
/// file when both words have vectors, otherwise from character-trigram
/// Jaccard. Sentence similarity is the IDF-weighted term-frequency cosine.
/// All outputs are symmetric and lie in [0, 1].
class SimilarityProvider {
 public:
  enum class Kind { kVectorFile, kLexicalFallback };

  static SimilarityProvider lexical();
  /// One word per line followed by whitespace-separated reals. A leading
  /// "<count> <dim>" header line is skipped.
  static SimilarityProvider from_vector_file(const std::filesystem::path& path);
  static SimilarityProvider from_vector_text(std::string_view content);

  Kind kind() const { return kind_; }
  const std::optional<std::filesystem::path>& source() const { return source_; }
  std::size_t vector_count() const { return vectors_.size(); }

  double word_similarity(std::string_view a, std::string_view b) const;
  double sentence_similarity(const TokenSeq& a, const TokenSeq& b,
                             const CorpusStats& stats) const;
  /// All-pairs sentence similarity as a dense matrix (small inputs only).
  Eigen::MatrixXd similarity_matrix(const std::vector<TokenSeq>& sentences,
                                    const CorpusStats& stats) const;
  /// rows x cols cross-similarity (e.g. test samples against train samples).
  Eigen::MatrixXd cross_similarity(const std::vector<TokenSeq>& rows,
                                   const std::vector<TokenSeq>& cols,
                                   const CorpusStats& stats) const;

 private:
  Kind kind_ = Kind::kLexicalFallback;
  std::optional<std::filesystem::path> source_;
  std::unordered_map<std::string, Eigen::VectorXd> vectors_;
};

double trigram_jaccard(std::string_view a, std::string_view b);

inline double word_similarity(const SimilarityProvider& provider,
                              std::string_view a, std::string_view b) {
  return provider.word_similarity(a, b);
}

inline double sentence_similarity(const SimilarityProvider& provider,
                                  const TokenSeq& a, const TokenSeq& b,
                                  const CorpusStats& stats) {
  return provider.sentence_similarity(a, b, stats);
}

/// Space-join of a token sequence.
std::string join(const TokenSeq& tokens);

}  // namespace dqi

#endif  // DQI_TEXTPRIMS_HPP_
