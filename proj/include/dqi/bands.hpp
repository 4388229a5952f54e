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

#ifndef DQI_BANDS_HPP_
#define DQI_BANDS_HPP_

#include <limits>
#include <map>
#include <set>
#include <string>
#include <string_view>

#include "dqi/engine.hpp"

namespace dqi {

enum class FlagColor { kRed, kYellow, kGreen };
std::string_view to_string(FlagColor color);

enum class Orientation { kCenterGreen, kHighGreen, kLowGreen };
std::string_view to_string(Orientation orientation);
std::optional<Orientation> parse_orientation(std::string_view text);

/// Fixed bands keep their endpoints; frequency bands scale with dataset size.
enum class BandScaling { kFixed, kFrequency };
std::string_view to_string(BandScaling scaling);
std::optional<BandScaling> parse_band_scaling(std::string_view text);

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Closed interval; either end may be infinite.
struct Interval {
  double lo = -kInf;
  double hi = kInf;

  bool contains(double v) const { return v >= lo && v <= hi; }
  double width() const { return hi - lo; }
  bool operator==(const Interval&) const = default;
};

/// Green inside yellow, red everywhere else. Boundaries belong to the
/// greener interval.
struct Band {
  Orientation orientation = Orientation::kCenterGreen;
  Interval green;
  Interval yellow;
  BandScaling scaling = BandScaling::kFixed;

  FlagColor color(double value) const;
  bool operator==(const Band&) const = default;
};

/// Validated constructor; throws kBadConfig when green is not inside yellow
/// or the infinite ends disagree with the orientation.
Band make_band(Orientation orientation, Interval green, Interval yellow,
               BandScaling scaling = BandScaling::kFixed);

/// Bands keyed by component ("c1") or term ("c5.overlap_ratio").
struct BandSpec {
  std::map<std::string, Band> bands;
  long reference_size = 1;

  /// Throws kMissingBand.
  const Band& at(std::string_view key) const;
  bool contains(std::string_view key) const { return bands.count(std::string(key)) > 0; }
  bool operator==(const BandSpec&) const = default;
};

struct FlagPanel {
  std::map<std::string, FlagColor> colors;
  double accept_probability = 0.0;

  int count(FlagColor c) const;
  bool all_green() const { return count(FlagColor::kGreen) == static_cast<int>(colors.size()); }
};

/// Plumbing formula, not a calibrated estimate:
/// (2 * greens + yellows) / (2 * entries).
double accept_probability(const std::map<std::string, FlagColor>& colors);

/// Throws kMissingBand naming the first value without a band.
FlagPanel assign_colors(const std::map<std::string, double>& values,
                        const BandSpec& bands);

/// Frequency bands scaled by dataset_size / reference_size. POS frequency
/// bands absent from `bands` are first derived from the params bounds.
BandSpec scale_bands(const BandSpec& bands, const HyperParams& params,
                     long dataset_size);

/// Narrows each sensitive green interval by factor * width, half per side.
/// A one-sided green moves its finite edge inward by factor times the
/// adjacent yellow width. Throws kBadFactor unless 0 <= factor < 1.
BandSpec shrink_green(const BandSpec& bands, const std::set<std::string>& sensitive,
                      double factor);

/// Band keys of the c5 terms flagged per sample.
inline constexpr std::string_view kOverlapRatioKey = "c5.overlap_ratio";
inline constexpr std::string_view kWordSimilarityKey = "c5.word_similarity_sum";

/// Mean unit frequency per POS granularity: "c2.<g>.frequency" over the whole
/// dataset and "c6.<g>.frequency" as the largest per-label mean.
std::map<std::string, double> frequency_values(const DqiReport& report);

/// Values colored for a draft: the seven deltas plus the draft's own c5
/// overlap ratio and word-similarity sum. An empty dataset falls back to the
/// cold-start values. `baseline` may carry compute_all(dataset) to skip
/// recomputing it.
std::map<std::string, double> draft_flag_values(const Dataset& dataset,
                                                const Sample& draft,
                                                const SimilarityProvider& provider,
                                                const HyperParams& params,
                                                const DqiReport* baseline = nullptr);

/// Center-green bands for c1..c7 from leave-one-out deltas over `dataset`:
/// median +- one standard deviation green, +- two yellow.
BandSpec calibrate_bands(const Dataset& dataset, const SimilarityProvider& provider,
                         const HyperParams& params);

}  // namespace dqi

#endif  // DQI_BANDS_HPP_
