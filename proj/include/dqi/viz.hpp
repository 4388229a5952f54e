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

#ifndef DQI_VIZ_HPP_
#define DQI_VIZ_HPP_

#include <optional>
#include <string>

#include "dqi/corpus.hpp"
#include "dqi/engine.hpp"
#include "dqi/report.hpp"

namespace dqi {

struct VizOptions {
  Granularity granularity = Granularity::kWords;  // c2, c6
  int bins = 10;                                  // c1, c5 histograms
  std::optional<std::string> sample;              // c4 heatmap target
  std::size_t top_k = 10;                         // c3 most-similar lists
  int density_points = 51;                        // c5 density curve
};

/// Plotted data of one component:
///
///   {"component": "c1", "focus": id|null,
///    "series": {name: [{"key": ..., ...}, ...]},
///    "highlighted": {name: [key, ...]}}
///
/// With a focus sample the series describe `dataset` plus the focus, and
/// `highlighted` lists the elements that differ from the series without it.
/// Throws kInvalidParams on bad options.
Json viz_series(Component component, const Dataset& dataset, const Sample* focus,
                const SimilarityProvider& provider, const HyperParams& params,
                const VizOptions& options = {});

}  // namespace dqi

#endif  // DQI_VIZ_HPP_
