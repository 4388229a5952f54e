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

#ifndef DQI_CORPUS_HPP_
#define DQI_CORPUS_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dqi {

enum class Label { kEntailment = 0, kNeutral = 1, kContradiction = 2 };
inline constexpr std::size_t kNumLabels = 3;
inline constexpr Label kAllLabels[kNumLabels] = {
    Label::kEntailment, Label::kNeutral, Label::kContradiction};

enum class Split { kTrain, kDev, kTest, kUnassigned };

std::string_view to_string(Label label);
std::string_view to_string(Split split);
std::optional<Label> parse_label(std::string_view text);
std::optional<Split> parse_split(std::string_view text);

/// One NLI record.
struct Sample {
  std::string id;
  std::string premise;
  std::string hypothesis;
  Label label = Label::kNeutral;
  std::optional<std::string> annotator_id;
  Split split = Split::kUnassigned;

  bool operator==(const Sample&) const = default;
};

/// Throws kInvalidSample when premise or hypothesis is blank or the id is empty.
void validate_sample(const Sample& sample);

/// Auto-assigned id for the record at `index` (zero-padded, width 6).
std::string auto_id(std::size_t index);

/// Immutable snapshot of a corpus.
///
/// Snapshots share their sample storage, so copying a Dataset is cheap. Every
/// mutating operation returns a new snapshot with `generation()` bumped and
/// leaves its input untouched. The predecessor of a trial addition and the
/// previous split assignments are kept so the corresponding undo operations
/// can restore them.
class Dataset {
 public:
  Dataset();
  /// Validates samples and id uniqueness; generation starts at 0.
  explicit Dataset(std::vector<Sample> samples);

  std::span<const Sample> samples() const { return *samples_; }
  std::size_t size() const { return samples_->size(); }
  /// Every sample contributes a premise and a hypothesis sentence.
  std::size_t sentence_count() const { return 2 * samples_->size(); }
  bool empty() const { return samples_->empty(); }
  std::uint64_t generation() const { return generation_; }

  const Sample* find(std::string_view id) const;
  bool contains(std::string_view id) const { return find(id) != nullptr; }

  bool split_frozen() const { return split_frozen_; }
  bool has_trial() const { return trial_parent_ != nullptr; }
  bool has_split_history() const { return split_history_ != nullptr; }
  /// Snapshot before the latest trial addition, or nullptr.
  const Dataset* trial_predecessor() const { return trial_parent_.get(); }

  /// New snapshot holding only the samples whose ids satisfy `keep`.
  /// History is not carried over.
  template <typename Pred>
  Dataset filter(Pred keep) const {
    std::vector<Sample> kept;
    for (const auto& s : *samples_)
      if (keep(s)) kept.push_back(s);
    return Dataset(std::move(kept));
  }

  /// Field-wise equality: samples, generation, frozen flag.
  bool operator==(const Dataset& other) const;

 private:
  struct SplitHistory {
    std::map<std::string, Split> tags;
    std::shared_ptr<const SplitHistory> previous;
  };

  friend Dataset add_trial_sample(const Dataset&, Sample);
  friend Dataset undo_trial(const Dataset&);
  friend Dataset apply_split_tags(const Dataset&,
                                  const std::map<std::string, Split>&);
  friend Dataset undo_split(const Dataset&);
  friend Dataset save_split(const Dataset&);

  void build_index();

  std::shared_ptr<const std::vector<Sample>> samples_;
  std::shared_ptr<const std::map<std::string, std::size_t, std::less<>>> index_;
  std::uint64_t generation_ = 0;
  bool split_frozen_ = false;
  std::shared_ptr<const Dataset> trial_parent_;
  std::shared_ptr<const SplitHistory> split_history_;
};

/// Appends `sample` as a trial addition (undoable). Throws kDuplicateId.
Dataset add_trial_sample(const Dataset& dataset, Sample sample);
/// Predecessor of the latest trial addition. Throws kNothingToUndo.
Dataset undo_trial(const Dataset& dataset);

/// Replaces split tags by id, recording the previous tags for undo_split.
/// Samples absent from `tags` keep their tag. Clears the trial history: a
/// sample cannot be withdrawn once it has been redistributed.
/// Throws kSplitFrozen after save_split, kUnknownId for ids not in the dataset.
Dataset apply_split_tags(const Dataset& dataset,
                         const std::map<std::string, Split>& tags);
/// Restores the tags in force before the latest apply_split_tags.
Dataset undo_split(const Dataset& dataset);
/// Freezes the current split; later split changes are refused.
Dataset save_split(const Dataset& dataset);

enum class DatasetFormat { kJsonl, kTsv };
std::optional<DatasetFormat> parse_format(std::string_view text);
/// Picks the format from the extension (.tsv -> TSV, anything else JSONL).
DatasetFormat format_from_path(const std::filesystem::path& path);

Dataset load_dataset(const std::filesystem::path& path, DatasetFormat format);
Dataset parse_dataset(std::string_view content, DatasetFormat format);
std::string serialize_dataset(const Dataset& dataset, DatasetFormat format);
void write_dataset(const std::filesystem::path& path, const Dataset& dataset,
                   DatasetFormat format);

enum class Partition { kGood, kBad };
std::string_view to_string(Partition partition);

using PartitionMembership = std::map<std::string, Partition>;

/// Reads a `id,good|bad` CSV. Throws kMissingId / kUnknownId unless the file
/// covers exactly the dataset's ids.
PartitionMembership load_partition(const std::filesystem::path& path,
                                   const Dataset& dataset);
PartitionMembership parse_partition(std::string_view content,
                                    const Dataset& dataset);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace dqi

#endif  // DQI_CORPUS_HPP_
