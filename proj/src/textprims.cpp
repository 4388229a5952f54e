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

#include "dqi/textprims.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "dqi/bundled.hpp"
#include "dqi/corpus.hpp"
#include "dqi/error.hpp"

namespace dqi {

namespace {

enum class CharClass { kWord, kApostrophe, kSeparator };

// Decodes one UTF-8 code point starting at `i`; returns its byte length.
// Invalid sequences are consumed one byte at a time as U+FFFD.
std::size_t decode_utf8(std::string_view s, std::size_t i, char32_t& cp) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  if (b0 < 0x80) {
    cp = b0;
    return 1;
  }
  std::size_t len = 0;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    cp = 0xFFFD;
    return 1;
  }
  if (i + len > s.size()) {
    cp = 0xFFFD;
    return 1;
  }
  for (std::size_t k = 1; k < len; ++k) {
    const auto b = static_cast<unsigned char>(s[i + k]);
    if ((b & 0xC0) != 0x80) {
      cp = 0xFFFD;
      return 1;
    }
    cp = (cp << 6) | (b & 0x3F);
  }
  return len;
}

CharClass classify(char32_t cp) {
  if (cp < 0x80) {
    const auto c = static_cast<unsigned char>(cp);
    if (std::isalnum(c)) return CharClass::kWord;
    if (c == '\'') return CharClass::kApostrophe;
    return CharClass::kSeparator;
  }
  if (cp == 0x2019 || cp == 0x2018 || cp == 0x02BC) return CharClass::kApostrophe;
  // Latin-1 punctuation and symbols, general punctuation, replacement char.
  if ((cp >= 0x00A0 && cp <= 0x00BF) || cp == 0x00D7 || cp == 0x00F7 ||
      (cp >= 0x2000 && cp <= 0x206F) || (cp >= 0x3000 && cp <= 0x303F) ||
      cp == 0xFEFF || cp == 0xFFFD)
    return CharClass::kSeparator;
  return CharClass::kWord;
}

void flush_token(std::string_view text, std::string& piece, std::size_t begin,
                 std::size_t end, std::vector<TokenSpan>& out) {
  // Strip leading and trailing apostrophes; keep internal ones.
  std::size_t lead = 0;
  while (lead < piece.size() && piece[lead] == '\'') ++lead;
  std::size_t trail = 0;
  while (trail < piece.size() - lead && piece[piece.size() - 1 - trail] == '\'')
    ++trail;
  if (lead + trail < piece.size()) {
    TokenSpan span;
    span.token = piece.substr(lead, piece.size() - lead - trail);
    // Map the stripped apostrophes back to source bytes.
    std::size_t b = begin;
    for (std::size_t k = 0; k < lead; ++k) {
      char32_t cp;
      b += decode_utf8(text, b, cp);
    }
    std::size_t e = end;
    for (std::size_t k = 0; k < trail; ++k) {
      std::size_t p = e - 1;
      while (p > b && (static_cast<unsigned char>(text[p]) & 0xC0) == 0x80) --p;
      e = p;
    }
    span.begin = b;
    span.end = e;
    out.push_back(std::move(span));
  }
  piece.clear();
}

std::vector<std::string_view> data_lines(std::string_view content) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start < content.size()) {
    std::size_t end = content.find('\n', start);
    if (end == std::string_view::npos) end = content.size();
    std::string_view line = content.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    while (!line.empty() && (line.back() == ' ' || line.back() == '\t'))
      line.remove_suffix(1);
    while (!line.empty() && line.front() == ' ') line.remove_prefix(1);
    if (!line.empty() && line.front() != '#') out.push_back(line);
    start = end + 1;
  }
  return out;
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() > suffix.size() &&
         s.substr(s.size() - suffix.size()) == suffix;
}

std::map<std::string, double> weighted_tf(const TokenSeq& tokens,
                                          const CorpusStats& stats) {
  std::map<std::string, double> counts;
  for (const auto& t : tokens) counts[t] += 1.0;
  for (auto& [t, w] : counts) w *= stats.idf(t);
  return counts;
}

double sum_squares(const std::map<std::string, double>& v) {
  double ss = 0.0;
  for (const auto& [t, w] : v) ss += w * w;
  return ss;
}

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

Eigen::MatrixXd cosine_from_products(const Eigen::MatrixXd& dots,
                                     const Eigen::VectorXd& row_ss,
                                     const Eigen::VectorXd& col_ss) {
  Eigen::MatrixXd out(dots.rows(), dots.cols());
  for (Eigen::Index j = 0; j < dots.cols(); ++j)
    for (Eigen::Index i = 0; i < dots.rows(); ++i) {
      const double denom = std::sqrt(row_ss(i) * col_ss(j));
      out(i, j) = denom > 0.0 ? clamp01(dots(i, j) / denom) : 0.0;
    }
  return out;
}

}  // namespace

std::vector<TokenSpan> tokenize_spans(std::string_view text) {
  std::vector<TokenSpan> out;
  std::string piece;
  std::size_t begin = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    char32_t cp;
    const std::size_t len = decode_utf8(text, i, cp);
    const CharClass cls = classify(cp);
    if (cls == CharClass::kSeparator) {
      if (!piece.empty()) flush_token(text, piece, begin, i, out);
    } else {
      if (piece.empty()) begin = i;
      if (cls == CharClass::kApostrophe) {
        piece += '\'';
      } else if (cp < 0x80) {
        piece += static_cast<char>(std::tolower(static_cast<unsigned char>(cp)));
      } else {
        piece.append(text.substr(i, len));
      }
    }
    i += len;
  }
  if (!piece.empty()) flush_token(text, piece, begin, text.size(), out);
  return out;
}

TokenSeq tokenize(std::string_view text) {
  TokenSeq out;
  for (auto& span : tokenize_spans(text)) out.push_back(std::move(span.token));
  return out;
}

std::string join(const TokenSeq& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += ' ';
    out += tokens[i];
  }
  return out;
}

std::string_view to_string(PosTag tag) {
  switch (tag) {
    case PosTag::kNoun: return "noun";
    case PosTag::kVerb: return "verb";
    case PosTag::kAdjective: return "adjective";
    case PosTag::kAdverb: return "adverb";
    case PosTag::kOther: return "other";
  }
  return "other";
}

std::optional<PosTag> parse_pos_tag(std::string_view text) {
  if (text == "noun") return PosTag::kNoun;
  if (text == "verb") return PosTag::kVerb;
  if (text == "adjective") return PosTag::kAdjective;
  if (text == "adverb") return PosTag::kAdverb;
  if (text == "other") return PosTag::kOther;
  return std::nullopt;
}

const TextResources& TextResources::bundled() {
  static const TextResources resources =
      parse(bundled::kStopwords, bundled::kPosLexicon,
            std::string(bundled::kStopwordsVersion),
            std::string(bundled::kTaggerVersion));
  return resources;
}

TextResources TextResources::parse(std::string_view stopwords,
                                   std::string_view pos_lexicon,
                                   std::string stopword_version,
                                   std::string tagger_version) {
  TextResources res;
  res.stopword_version_ = std::move(stopword_version);
  res.tagger_version_ = std::move(tagger_version);
  for (auto line : data_lines(stopwords)) {
    for (auto& t : tokenize(line)) res.stopwords_.insert(std::move(t));
  }
  for (auto line : data_lines(pos_lexicon)) {
    const auto tab = line.find('\t');
    if (tab == std::string_view::npos)
      throw Error(ErrorCode::kBadConfig,
                  "POS lexicon line without tab: '" + std::string(line) + "'");
    const auto tag = parse_pos_tag(line.substr(tab + 1));
    if (!tag)
      throw Error(ErrorCode::kBadConfig,
                  "unknown POS tag in '" + std::string(line) + "'");
    res.lexicon_.emplace(std::string(line.substr(0, tab)), *tag);
  }
  return res;
}

TextResources TextResources::from_files(const std::filesystem::path& stopwords,
                                        const std::filesystem::path& pos_lexicon) {
  return parse(read_file(stopwords), read_file(pos_lexicon),
               stopwords.filename().string(), pos_lexicon.filename().string());
}

bool TextResources::is_stop_word(std::string_view token) const {
  return stopwords_.find(token) != stopwords_.end();
}

std::optional<PosTag> TextResources::lexicon_tag(std::string_view token) const {
  const auto it = lexicon_.find(token);
  if (it == lexicon_.end()) return std::nullopt;
  return it->second;
}

TokenSeq content_tokens(const TokenSeq& tokens, const TextResources& res) {
  TokenSeq out;
  for (const auto& t : tokens)
    if (!res.is_stop_word(t)) out.push_back(t);
  return out;
}

PosTag tag_word(std::string_view token, const TextResources& res) {
  if (auto tag = res.lexicon_tag(token)) return *tag;
  if (res.is_stop_word(token)) return PosTag::kOther;
  if (ends_with(token, "ly")) return PosTag::kAdverb;
  if (ends_with(token, "ing") || ends_with(token, "ed")) return PosTag::kVerb;
  if (ends_with(token, "ous") || ends_with(token, "ful") || ends_with(token, "ive"))
    return PosTag::kAdjective;
  return PosTag::kNoun;
}

std::vector<TaggedToken> pos_tag(const TokenSeq& tokens, const TextResources& res) {
  std::vector<TaggedToken> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back({t, tag_word(t, res)});
  return out;
}

std::vector<std::string> ngrams(const TokenSeq& tokens, int n) {
  if (n != 2 && n != 3)
    throw Error(ErrorCode::kBadN, "n must be 2 or 3, got " + std::to_string(n));
  std::vector<std::string> out;
  const auto un = static_cast<std::size_t>(n);
  for (std::size_t i = 0; i + un <= tokens.size(); ++i) {
    std::string g = tokens[i];
    for (std::size_t k = 1; k < un; ++k) {
      g += ' ';
      g += tokens[i + k];
    }
    out.push_back(std::move(g));
  }
  return out;
}

CorpusStats::CorpusStats(const std::vector<TokenSeq>& sentences)
    : sentence_count_(sentences.size()) {
  for (const auto& s : sentences) {
    std::set<std::string_view> seen(s.begin(), s.end());
    for (auto t : seen) {
      auto it = document_frequency_.find(t);
      if (it == document_frequency_.end())
        document_frequency_.emplace(std::string(t), 1);
      else
        ++it->second;
    }
  }
}

CorpusStats CorpusStats::from_dataset(const Dataset& dataset) {
  std::vector<TokenSeq> sentences;
  sentences.reserve(dataset.sentence_count());
  for (const auto& s : dataset.samples()) {
    sentences.push_back(tokenize(s.premise));
    sentences.push_back(tokenize(s.hypothesis));
  }
  return CorpusStats(sentences);
}

double CorpusStats::idf(std::string_view token) const {
  const auto it = document_frequency_.find(token);
  const double df = it == document_frequency_.end() ? 0.0
                                                    : static_cast<double>(it->second);
  return std::log((1.0 + static_cast<double>(sentence_count_)) / (1.0 + df)) + 1.0;
}

SimilarityProvider SimilarityProvider::lexical() { return SimilarityProvider(); }

SimilarityProvider SimilarityProvider::from_vector_text(std::string_view content) {
  SimilarityProvider p;
  p.kind_ = Kind::kVectorFile;
  Eigen::Index dim = -1;
  bool first = true;
  for (auto line : data_lines(content)) {
    std::istringstream in{std::string(line)};
    std::string word;
    in >> word;
    std::vector<double> values;
    double v;
    while (in >> v) values.push_back(v);
    if (first) {
      first = false;
      // word2vec-style "<count> <dim>" header.
      if (values.size() == 1 &&
          word.find_first_not_of("0123456789") == std::string::npos)
        continue;
    }
    if (!in.eof())
      throw Error(ErrorCode::kBadConfig,
                  "non-numeric vector component for '" + word + "'");
    if (values.empty()) continue;
    if (dim < 0) dim = static_cast<Eigen::Index>(values.size());
    if (static_cast<Eigen::Index>(values.size()) != dim)
      throw Error(ErrorCode::kBadConfig, "vector for '" + word +
                                             "' has dimension " +
                                             std::to_string(values.size()));
    TokenSeq key = tokenize(word);
    if (key.size() != 1) continue;
    p.vectors_.emplace(key.front(),
                       Eigen::Map<Eigen::VectorXd>(values.data(), dim));
  }
  return p;
}

SimilarityProvider SimilarityProvider::from_vector_file(
    const std::filesystem::path& path) {
  auto p = from_vector_text(read_file(path));
  p.source_ = path;
  return p;
}

double trigram_jaccard(std::string_view a, std::string_view b) {
  if (a == b) return 1.0;
  const auto grams = [](std::string_view w) {
    std::set<std::string> out;
    const std::string padded = "#" + std::string(w) + "#";
    for (std::size_t i = 0; i + 3 <= padded.size(); ++i)
      out.insert(padded.substr(i, 3));
    return out;
  };
  const auto ga = grams(a);
  const auto gb = grams(b);
  std::size_t shared = 0;
  for (const auto& g : ga) shared += gb.count(g);
  const std::size_t uni = ga.size() + gb.size() - shared;
  return uni == 0 ? 0.0 : static_cast<double>(shared) / static_cast<double>(uni);
}

double SimilarityProvider::word_similarity(std::string_view a,
                                           std::string_view b) const {
  if (a == b) return 1.0;
  if (kind_ == Kind::kVectorFile) {
    const auto ia = vectors_.find(std::string(a));
    const auto ib = vectors_.find(std::string(b));
    if (ia != vectors_.end() && ib != vectors_.end()) {
      const double na = ia->second.squaredNorm();
      const double nb = ib->second.squaredNorm();
      if (na > 0.0 && nb > 0.0) {
        const double cosine = ia->second.dot(ib->second) / std::sqrt(na * nb);
        return clamp01((cosine + 1.0) / 2.0);
      }
    }
  }
  return trigram_jaccard(a, b);
}

double SimilarityProvider::sentence_similarity(const TokenSeq& a,
                                               const TokenSeq& b,
                                               const CorpusStats& stats) const {
  const auto va = weighted_tf(a, stats);
  const auto vb = weighted_tf(b, stats);
  const double denom = std::sqrt(sum_squares(va) * sum_squares(vb));
  if (denom <= 0.0) return 0.0;
  // Walk the shared keys in sorted order so the sum is argument-order free.
  double dot = 0.0;
  auto ia = va.begin();
  auto ib = vb.begin();
  while (ia != va.end() && ib != vb.end()) {
    if (ia->first < ib->first) {
      ++ia;
    } else if (ib->first < ia->first) {
      ++ib;
    } else {
      dot += ia->second * ib->second;
      ++ia;
      ++ib;
    }
  }
  return clamp01(dot / denom);
}

SentenceIndex::SentenceIndex(const std::vector<TokenSeq>& sentences,
                             const CorpusStats& stats)
    : stats_(stats) {
  for (const auto& s : sentences)
    for (const auto& t : s) vocabulary_.emplace(t, 0);
  Eigen::Index next = 0;
  for (auto& [t, idx] : vocabulary_) idx = next++;
  rows_ = encode(sentences, squared_norms_);
}

SentenceIndex::SparseRows SentenceIndex::encode(
    const std::vector<TokenSeq>& sentences, Eigen::VectorXd& squared_norms) const {
  std::vector<Eigen::Triplet<double>> triplets;
  squared_norms.setZero(static_cast<Eigen::Index>(sentences.size()));
  for (std::size_t r = 0; r < sentences.size(); ++r) {
    const auto weights = weighted_tf(sentences[r], stats_);
    squared_norms(static_cast<Eigen::Index>(r)) = sum_squares(weights);
    for (const auto& [t, w] : weights) {
      const auto it = vocabulary_.find(t);
      if (it != vocabulary_.end())
        triplets.emplace_back(static_cast<Eigen::Index>(r), it->second, w);
    }
  }
  SparseRows m(static_cast<Eigen::Index>(sentences.size()),
               static_cast<Eigen::Index>(vocabulary_.size()));
  m.setFromTriplets(triplets.begin(), triplets.end());
  return m;
}

Eigen::MatrixXd SentenceIndex::query(const std::vector<TokenSeq>& queries) const {
  Eigen::VectorXd query_norms;
  const SparseRows q = encode(queries, query_norms);
  const Eigen::MatrixXd dots = Eigen::MatrixXd(q * rows_.transpose());
  return cosine_from_products(dots, query_norms, squared_norms_);
}

Eigen::MatrixXd SentenceIndex::block(Eigen::Index first, Eigen::Index count) const {
  const SparseRows part = rows_.middleRows(first, count);
  const Eigen::MatrixXd dots = Eigen::MatrixXd(part * rows_.transpose());
  Eigen::MatrixXd sim =
      cosine_from_products(dots, squared_norms_.segment(first, count), squared_norms_);
  for (Eigen::Index i = 0; i < count; ++i)
    sim(i, first + i) = squared_norms_(first + i) > 0.0 ? 1.0 : 0.0;
  return sim;
}

Eigen::MatrixXd SimilarityProvider::similarity_matrix(
    const std::vector<TokenSeq>& sentences, const CorpusStats& stats) const {
  const SentenceIndex index(sentences, stats);
  return index.block(0, index.size());
}

Eigen::MatrixXd SimilarityProvider::cross_similarity(
    const std::vector<TokenSeq>& rows, const std::vector<TokenSeq>& cols,
    const CorpusStats& stats) const {
  return SentenceIndex(cols, stats).query(rows);
}

}  // namespace dqi
