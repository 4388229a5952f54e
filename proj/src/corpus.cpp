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

#include "dqi/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "dqi/error.hpp"
#include "json.hpp"

namespace dqi {

namespace {

std::string_view trim(std::string_view s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  const auto* b = std::find_if(s.begin(), s.end(), not_space);
  const auto* e = std::find_if(s.rbegin(), s.rend(), not_space).base();
  return b < e ? std::string_view(b, static_cast<std::size_t>(e - b))
               : std::string_view();
}

std::vector<std::string_view> split_lines(std::string_view content) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= content.size()) {
    std::size_t end = content.find('\n', start);
    if (end == std::string_view::npos) end = content.size();
    std::string_view line = content.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

std::vector<std::string_view> split_on(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string tsv_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\\': out += "\\\\"; break;
      default: out += c;
    }
  }
  return out;
}

std::string tsv_unescape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '\\' && i + 1 < s.size()) {
      switch (s[i + 1]) {
        case 't': out += '\t'; ++i; continue;
        case 'n': out += '\n'; ++i; continue;
        case 'r': out += '\r'; ++i; continue;
        case '\\': out += '\\'; ++i; continue;
        default: break;
      }
    }
    out += s[i];
  }
  return out;
}

[[noreturn]] void malformed(std::size_t line, const std::string& what) {
  throw Error(ErrorCode::kMalformedRecord,
              "line " + std::to_string(line) + ": " + what);
}

Label require_label(std::string_view text, std::size_t line) {
  const auto label = parse_label(trim(text));
  if (!label) {
    throw Error(ErrorCode::kUnknownLabel, "line " + std::to_string(line) +
                                              ": '" + std::string(text) + "'");
  }
  return *label;
}

Split require_split(std::string_view text, std::size_t line) {
  const auto split = parse_split(trim(text));
  if (!split) malformed(line, "unknown split '" + std::string(text) + "'");
  return *split;
}

Sample parse_jsonl_record(std::string_view text, std::size_t line,
                          std::size_t index) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    malformed(line, e.what());
  }
  if (!j.is_object()) malformed(line, "record is not a JSON object");

  const auto string_field = [&](const char* key,
                                bool required) -> std::optional<std::string> {
    const auto it = j.find(key);
    if (it == j.end() || it->is_null()) {
      if (required) malformed(line, std::string("missing '") + key + "'");
      return std::nullopt;
    }
    if (!it->is_string()) malformed(line, std::string("'") + key + "' is not a string");
    return it->get<std::string>();
  };

  Sample s;
  s.premise = *string_field("premise", true);
  s.hypothesis = *string_field("hypothesis", true);
  s.label = require_label(*string_field("label", true), line);
  s.annotator_id = string_field("annotator_id", false);
  if (s.annotator_id && trim(*s.annotator_id).empty()) s.annotator_id.reset();
  if (auto split = string_field("split", false)) s.split = require_split(*split, line);
  auto id = string_field("id", false);
  s.id = id && !trim(*id).empty() ? std::string(trim(*id)) : auto_id(index);
  if (trim(s.premise).empty() || trim(s.hypothesis).empty())
    malformed(line, "premise and hypothesis must be non-empty");
  return s;
}

Sample parse_tsv_record(std::string_view text, std::size_t line,
                        std::size_t index) {
  const auto fields = split_on(text, '\t');
  if (fields.size() < 3 || fields.size() > 6)
    malformed(line, "expected 5 tab-separated columns, got " +
                        std::to_string(fields.size()));
  Sample s;
  s.premise = tsv_unescape(fields[0]);
  s.hypothesis = tsv_unescape(fields[1]);
  s.label = require_label(fields[2], line);
  if (fields.size() > 3 && !trim(fields[3]).empty())
    s.annotator_id = tsv_unescape(trim(fields[3]));
  if (fields.size() > 4) s.split = require_split(fields[4], line);
  s.id = fields.size() > 5 && !trim(fields[5]).empty()
             ? tsv_unescape(trim(fields[5]))
             : auto_id(index);
  if (trim(s.premise).empty() || trim(s.hypothesis).empty())
    malformed(line, "premise and hypothesis must be non-empty");
  return s;
}

}  // namespace

std::string_view to_string(Label label) {
  switch (label) {
    case Label::kEntailment: return "entailment";
    case Label::kNeutral: return "neutral";
    case Label::kContradiction: return "contradiction";
  }
  return "neutral";
}

std::string_view to_string(Split split) {
  switch (split) {
    case Split::kTrain: return "train";
    case Split::kDev: return "dev";
    case Split::kTest: return "test";
    case Split::kUnassigned: return "unassigned";
  }
  return "unassigned";
}

std::string_view to_string(Partition partition) {
  return partition == Partition::kGood ? "good" : "bad";
}

std::optional<Label> parse_label(std::string_view text) {
  if (text == "entailment") return Label::kEntailment;
  if (text == "neutral") return Label::kNeutral;
  if (text == "contradiction") return Label::kContradiction;
  return std::nullopt;
}

std::optional<Split> parse_split(std::string_view text) {
  if (text == "train") return Split::kTrain;
  if (text == "dev") return Split::kDev;
  if (text == "test") return Split::kTest;
  if (text == "unassigned" || text.empty()) return Split::kUnassigned;
  return std::nullopt;
}

std::optional<DatasetFormat> parse_format(std::string_view text) {
  if (text == "jsonl") return DatasetFormat::kJsonl;
  if (text == "tsv") return DatasetFormat::kTsv;
  return std::nullopt;
}

DatasetFormat format_from_path(const std::filesystem::path& path) {
  return path.extension() == ".tsv" ? DatasetFormat::kTsv
                                    : DatasetFormat::kJsonl;
}

void validate_sample(const Sample& sample) {
  if (trim(sample.id).empty())
    throw Error(ErrorCode::kInvalidSample, "sample id is empty");
  if (trim(sample.premise).empty())
    throw Error(ErrorCode::kInvalidSample, "premise of '" + sample.id + "' is empty");
  if (trim(sample.hypothesis).empty())
    throw Error(ErrorCode::kInvalidSample,
                "hypothesis of '" + sample.id + "' is empty");
}

std::string auto_id(std::size_t index) {
  std::string digits = std::to_string(index);
  if (digits.size() < 6) digits.insert(0, 6 - digits.size(), '0');
  return digits;
}

Dataset::Dataset()
    : samples_(std::make_shared<const std::vector<Sample>>()),
      index_(std::make_shared<
             const std::map<std::string, std::size_t, std::less<>>>()) {}

Dataset::Dataset(std::vector<Sample> samples) {
  for (const auto& s : samples) validate_sample(s);
  samples_ = std::make_shared<const std::vector<Sample>>(std::move(samples));
  build_index();
}

void Dataset::build_index() {
  auto index =
      std::make_shared<std::map<std::string, std::size_t, std::less<>>>();
  for (std::size_t i = 0; i < samples_->size(); ++i) {
    const auto& id = (*samples_)[i].id;
    if (!index->emplace(id, i).second)
      throw Error(ErrorCode::kDuplicateId, "'" + id + "'");
  }
  index_ = std::move(index);
}

const Sample* Dataset::find(std::string_view id) const {
  const auto it = index_->find(id);
  return it == index_->end() ? nullptr : &(*samples_)[it->second];
}

bool Dataset::operator==(const Dataset& other) const {
  return generation_ == other.generation_ &&
         split_frozen_ == other.split_frozen_ &&
         (samples_ == other.samples_ || *samples_ == *other.samples_);
}

Dataset add_trial_sample(const Dataset& dataset, Sample sample) {
  validate_sample(sample);
  if (dataset.contains(sample.id))
    throw Error(ErrorCode::kDuplicateId, "'" + sample.id + "'");
  Dataset next = dataset;
  auto samples = std::make_shared<std::vector<Sample>>(*dataset.samples_);
  samples->push_back(std::move(sample));
  next.samples_ = std::move(samples);
  next.build_index();
  next.generation_ = dataset.generation_ + 1;
  next.trial_parent_ = std::make_shared<const Dataset>(dataset);
  return next;
}

Dataset undo_trial(const Dataset& dataset) {
  if (!dataset.trial_parent_)
    throw Error(ErrorCode::kNothingToUndo, "no trial addition to undo");
  return *dataset.trial_parent_;
}

Dataset apply_split_tags(const Dataset& dataset,
                         const std::map<std::string, Split>& tags) {
  if (dataset.split_frozen_)
    throw Error(ErrorCode::kSplitFrozen, "split has been saved");
  for (const auto& [id, split] : tags)
    if (!dataset.contains(id)) throw Error(ErrorCode::kUnknownId, "'" + id + "'");

  auto history = std::make_shared<Dataset::SplitHistory>();
  for (const auto& s : *dataset.samples_) history->tags.emplace(s.id, s.split);
  history->previous = dataset.split_history_;

  auto samples = std::make_shared<std::vector<Sample>>(*dataset.samples_);
  for (auto& s : *samples) {
    const auto it = tags.find(s.id);
    if (it != tags.end()) s.split = it->second;
  }
  Dataset next = dataset;
  next.samples_ = std::move(samples);
  next.generation_ = dataset.generation_ + 1;
  next.trial_parent_.reset();
  next.split_history_ = std::move(history);
  return next;
}

Dataset undo_split(const Dataset& dataset) {
  if (!dataset.split_history_)
    throw Error(ErrorCode::kNothingToUndo, "no split randomization to undo");
  if (dataset.split_frozen_)
    throw Error(ErrorCode::kSplitFrozen, "split has been saved");
  const auto& restore = dataset.split_history_->tags;
  auto samples = std::make_shared<std::vector<Sample>>(*dataset.samples_);
  for (auto& s : *samples) {
    const auto it = restore.find(s.id);
    if (it != restore.end()) s.split = it->second;
  }
  Dataset next = dataset;
  next.samples_ = std::move(samples);
  next.generation_ = dataset.generation_ + 1;
  next.split_history_ = dataset.split_history_->previous;
  return next;
}

Dataset save_split(const Dataset& dataset) {
  Dataset next = dataset;
  next.split_frozen_ = true;
  next.split_history_.reset();
  next.generation_ = dataset.generation_ + 1;
  return next;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write '" + path.string() + "'");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error(ErrorCode::kIoError, "short write to '" + path.string() + "'");
}

Dataset parse_dataset(std::string_view content, DatasetFormat format) {
  std::vector<Sample> samples;
  const auto lines = split_lines(content);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    const std::size_t line_no = i + 1;
    samples.push_back(format == DatasetFormat::kJsonl
                          ? parse_jsonl_record(lines[i], line_no, samples.size())
                          : parse_tsv_record(lines[i], line_no, samples.size()));
  }
  if (samples.empty()) throw Error(ErrorCode::kEmptyFile, "no records");
  return Dataset(std::move(samples));
}

Dataset load_dataset(const std::filesystem::path& path, DatasetFormat format) {
  return parse_dataset(read_file(path), format);
}

std::string serialize_dataset(const Dataset& dataset, DatasetFormat format) {
  std::string out;
  const auto samples = dataset.samples();
  if (format == DatasetFormat::kJsonl) {
    for (const auto& s : samples) {
      nlohmann::ordered_json j;
      j["id"] = s.id;
      j["premise"] = s.premise;
      j["hypothesis"] = s.hypothesis;
      j["label"] = to_string(s.label);
      if (s.annotator_id) j["annotator_id"] = *s.annotator_id;
      j["split"] = to_string(s.split);
      out += j.dump();
      out += '\n';
    }
    return out;
  }
  // The id column is only written when some id is not the auto-assigned one,
  // so plain corpora stay in the 5-column layout.
  bool custom_ids = false;
  for (std::size_t i = 0; i < samples.size(); ++i)
    custom_ids = custom_ids || samples[i].id != auto_id(i);
  for (const auto& s : samples) {
    out += tsv_escape(s.premise);
    out += '\t';
    out += tsv_escape(s.hypothesis);
    out += '\t';
    out += to_string(s.label);
    out += '\t';
    out += tsv_escape(s.annotator_id.value_or(""));
    out += '\t';
    out += to_string(s.split);
    if (custom_ids) {
      out += '\t';
      out += tsv_escape(s.id);
    }
    out += '\n';
  }
  return out;
}

void write_dataset(const std::filesystem::path& path, const Dataset& dataset,
                   DatasetFormat format) {
  write_file(path, serialize_dataset(dataset, format));
}

PartitionMembership parse_partition(std::string_view content,
                                    const Dataset& dataset) {
  PartitionMembership membership;
  const auto lines = split_lines(content);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto line = trim(lines[i]);
    if (line.empty()) continue;
    const auto fields = split_on(line, ',');
    if (fields.size() != 2) malformed(i + 1, "expected 'id,good|bad'");
    const std::string id(trim(fields[0]));
    const auto tag = trim(fields[1]);
    if (i == 0 && id == "id" && tag != "good" && tag != "bad") continue;
    Partition p;
    if (tag == "good") {
      p = Partition::kGood;
    } else if (tag == "bad") {
      p = Partition::kBad;
    } else {
      malformed(i + 1, "partition must be 'good' or 'bad'");
    }
    if (!dataset.contains(id)) throw Error(ErrorCode::kUnknownId, "'" + id + "'");
    const auto [it, inserted] = membership.emplace(id, p);
    if (!inserted && it->second != p)
      malformed(i + 1, "conflicting membership for '" + id + "'");
  }
  for (const auto& s : dataset.samples())
    if (!membership.contains(s.id))
      throw Error(ErrorCode::kMissingId, "'" + s.id + "'");
  return membership;
}

PartitionMembership load_partition(const std::filesystem::path& path,
                                   const Dataset& dataset) {
  return parse_partition(read_file(path), dataset);
}

}  // namespace dqi
