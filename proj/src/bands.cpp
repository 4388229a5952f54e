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

#include "dqi/bands.hpp"

#include <algorithm>
#include <cmath>

#include "dqi/error.hpp"
#include "dqi/stats.hpp"

namespace dqi {

namespace {

int rank(FlagColor c) { return static_cast<int>(c); }

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  if (n == 0) return 0.0;
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string unused_id(const Dataset& dataset, std::string base) {
  std::string id = base;
  for (int k = 2; dataset.contains(id); ++k) id = base + "-" + std::to_string(k);
  return id;
}

const PairDetail* find_pair(const ComponentReport& c5, std::string_view id) {
  for (const auto& p : c5.pairs)
    if (p.id == id) return &p;
  return nullptr;
}

Interval scaled(Interval v, double ratio) {
  return {std::isfinite(v.lo) ? v.lo * ratio : v.lo,
          std::isfinite(v.hi) ? v.hi * ratio : v.hi};
}

}  // namespace

std::string_view to_string(FlagColor color) {
  switch (color) {
    case FlagColor::kRed: return "red";
    case FlagColor::kYellow: return "yellow";
    case FlagColor::kGreen: return "green";
  }
  return "red";
}

std::string_view to_string(Orientation orientation) {
  switch (orientation) {
    case Orientation::kCenterGreen: return "center_green";
    case Orientation::kHighGreen: return "high_green";
    case Orientation::kLowGreen: return "low_green";
  }
  return "center_green";
}

std::optional<Orientation> parse_orientation(std::string_view text) {
  for (auto o : {Orientation::kCenterGreen, Orientation::kHighGreen, Orientation::kLowGreen})
    if (to_string(o) == text) return o;
  return std::nullopt;
}

std::string_view to_string(BandScaling scaling) {
  return scaling == BandScaling::kFixed ? "fixed" : "frequency";
}

std::optional<BandScaling> parse_band_scaling(std::string_view text) {
  if (text == "fixed") return BandScaling::kFixed;
  if (text == "frequency") return BandScaling::kFrequency;
  return std::nullopt;
}

FlagColor Band::color(double value) const {
  if (green.contains(value)) return FlagColor::kGreen;
  if (yellow.contains(value)) return FlagColor::kYellow;
  return FlagColor::kRed;
}

Band make_band(Orientation orientation, Interval green, Interval yellow,
               BandScaling scaling) {
  const auto fail = [](const std::string& what) {
    throw Error(ErrorCode::kBadConfig, "band: " + what);
  };
  if (std::isnan(green.lo) || std::isnan(green.hi) || std::isnan(yellow.lo) ||
      std::isnan(yellow.hi))
    fail("NaN endpoint");
  if (green.lo > green.hi) fail("green interval is empty");
  if (yellow.lo > green.lo || yellow.hi < green.hi) fail("green must lie inside yellow");
  switch (orientation) {
    case Orientation::kCenterGreen:
      if (!std::isfinite(green.lo) || !std::isfinite(green.hi))
        fail("center_green needs a finite green interval");
      break;
    case Orientation::kHighGreen:
      if (!std::isfinite(green.lo) || green.hi != kInf)
        fail("high_green needs a finite lower green edge and no upper edge");
      break;
    case Orientation::kLowGreen:
      if (green.lo != -kInf || !std::isfinite(green.hi))
        fail("low_green needs a finite upper green edge and no lower edge");
      break;
  }
  return Band{orientation, green, yellow, scaling};
}

const Band& BandSpec::at(std::string_view key) const {
  const auto it = bands.find(std::string(key));
  if (it == bands.end())
    throw Error(ErrorCode::kMissingBand, "no band for '" + std::string(key) + "'");
  return it->second;
}

int FlagPanel::count(FlagColor c) const {
  return static_cast<int>(std::count_if(colors.begin(), colors.end(),
                                        [c](const auto& kv) { return kv.second == c; }));
}

double accept_probability(const std::map<std::string, FlagColor>& colors) {
  if (colors.empty()) return 0.0;
  double score = 0.0;
  for (const auto& [k, c] : colors) score += rank(c);
  return score / (2.0 * static_cast<double>(colors.size()));
}

FlagPanel assign_colors(const std::map<std::string, double>& values,
                        const BandSpec& bands) {
  FlagPanel panel;
  for (const auto& [key, v] : values) panel.colors[key] = bands.at(key).color(v);
  panel.accept_probability = accept_probability(panel.colors);
  return panel;
}

BandSpec scale_bands(const BandSpec& bands, const HyperParams& params,
                     long dataset_size) {
  if (dataset_size < 1)
    throw Error(ErrorCode::kInvalidParams, "dataset size must be at least 1");
  BandSpec out = bands;
  for (const auto g : kAllGranularities) {
    if (!is_pos_granularity(g)) continue;
    const std::string name(to_string(g));
    const auto b = params.bounds(g);
    out.bands.try_emplace(
        "c2." + name + ".frequency",
        make_band(Orientation::kCenterGreen, {double(b.lower), double(b.upper)},
                  {0.0, 2.0 * b.upper}, BandScaling::kFrequency));
    out.bands.try_emplace(
        "c6." + name + ".frequency",
        make_band(Orientation::kCenterGreen, {0.0, double(params.label_frequency_cap)},
                  {0.0, 2.0 * params.label_frequency_cap}, BandScaling::kFrequency));
  }
  const double ratio = static_cast<double>(dataset_size) /
                       static_cast<double>(std::max(bands.reference_size, 1L));
  for (auto& [key, band] : out.bands) {
    if (band.scaling != BandScaling::kFrequency) continue;
    band.green = scaled(band.green, ratio);
    band.yellow = scaled(band.yellow, ratio);
  }
  out.reference_size = dataset_size;
  return out;
}

BandSpec shrink_green(const BandSpec& bands, const std::set<std::string>& sensitive,
                      double factor) {
  if (!(factor >= 0.0 && factor < 1.0))
    throw Error(ErrorCode::kBadFactor, "factor must lie in [0, 1)");
  BandSpec out = bands;
  for (const auto& key : sensitive) {
    auto it = out.bands.find(key);
    if (it == out.bands.end())
      throw Error(ErrorCode::kMissingBand, "no band for '" + key + "'");
    Band& b = it->second;
    switch (b.orientation) {
      case Orientation::kCenterGreen: {
        const double half = factor * b.green.width() / 2.0;
        b.green = {b.green.lo + half, b.green.hi - half};
        break;
      }
      case Orientation::kHighGreen: {
        double span = b.green.lo - b.yellow.lo;
        if (!std::isfinite(span) || span <= 0.0) span = std::max(std::abs(b.green.lo), 1.0);
        b.green.lo += factor * span;
        break;
      }
      case Orientation::kLowGreen: {
        double span = b.yellow.hi - b.green.hi;
        if (!std::isfinite(span) || span <= 0.0) span = std::max(std::abs(b.green.hi), 1.0);
        b.green.hi -= factor * span;
        break;
      }
    }
  }
  return out;
}

std::map<std::string, double> frequency_values(const DqiReport& report) {
  std::map<std::string, double> out;
  const auto mean = [](const GranularityTerms& t) {
    return t.units == 0 ? 0.0 : static_cast<double>(t.mass) / static_cast<double>(t.units);
  };
  for (const auto g : kAllGranularities) {
    if (!is_pos_granularity(g)) continue;
    const std::string name(to_string(g));
    const auto& c2 = report.at(Component::kC2).granularities;
    if (auto it = c2.find(name); it != c2.end())
      out["c2." + name + ".frequency"] = mean(it->second);
    const auto& c6 = report.at(Component::kC6).granularities;
    double best = -1.0;
    for (const auto label : kAllLabels) {
      const auto it = c6.find(std::string(to_string(label)) + "." + name);
      if (it != c6.end()) best = std::max(best, mean(it->second));
    }
    if (best >= 0.0) out["c6." + name + ".frequency"] = best;
  }
  return out;
}

std::map<std::string, double> draft_flag_values(const Dataset& dataset,
                                                const Sample& draft,
                                                const SimilarityProvider& provider,
                                                const HyperParams& params,
                                                const DqiReport* baseline) {
  Sample s = draft;
  if (s.id.empty() || dataset.contains(s.id)) s.id = unused_id(dataset, "draft");
  std::map<std::string, double> out;
  const ComponentReport* c5 = nullptr;
  DqiReport cold;
  DqiReport after;
  if (dataset.empty()) {
    cold = cold_start(s, provider, params);
    for (const auto c : kAllComponents) out[std::string(to_string(c))] = cold.value(c);
    c5 = &cold.at(Component::kC5);
  } else {
    DqiReport computed;
    if (!baseline) computed = compute_all(dataset, provider, params);
    const DqiReport& before = baseline ? *baseline : computed;
    after = compute_all(add_trial_sample(dataset, s), provider, params);
    for (const auto c : kAllComponents)
      out[std::string(to_string(c))] = before.value(c) - after.value(c);
    c5 = &after.at(Component::kC5);
  }
  const PairDetail* p = find_pair(*c5, s.id);
  out[std::string(kOverlapRatioKey)] = p->overlap_ratio;
  out[std::string(kWordSimilarityKey)] = p->word_similarity_sum;
  return out;
}

BandSpec calibrate_bands(const Dataset& dataset, const SimilarityProvider& provider,
                         const HyperParams& params) {
  if (dataset.size() < 3)
    throw Error(ErrorCode::kEmptyDataset, "calibration needs at least three samples");
  const DqiReport full = compute_all(dataset, provider, params);
  std::map<Component, std::vector<double>> deltas;
  for (const auto& s : dataset.samples()) {
    const Dataset rest = dataset.filter([&](const Sample& o) { return o.id != s.id; });
    const DqiReport before = compute_all(rest, provider, params);
    for (const auto c : kAllComponents) deltas[c].push_back(before.value(c) - full.value(c));
  }
  BandSpec out;
  out.reference_size = static_cast<long>(dataset.size());
  for (const auto c : kAllComponents) {
    const auto& v = deltas[c];
    const double m = median(v);
    double sd = sample_stddev(v);
    if (sd <= 0.0) sd = std::max(std::abs(m) * 0.05, 1e-6);
    out.bands[std::string(to_string(c))] =
        make_band(Orientation::kCenterGreen, {m - sd, m + sd}, {m - 2 * sd, m + 2 * sd});
  }
  return out;
}

}  // namespace dqi
