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

#ifndef DQI_CONFIG_HPP_
#define DQI_CONFIG_HPP_

#include <filesystem>
#include <string>
#include <string_view>

#include "dqi/bands.hpp"
#include "dqi/engine.hpp"

namespace dqi {

/// Hyperparameters and bands share one INI-style file:
///
///   a = 3                 ; scalar hyperparameters at top level
///   [nouns]               ; frequency bounds per granularity
///   c = 1
///   d = 50
///   [aggregate]           ; component weights
///   c1 = 1
///   [band:c5.overlap_ratio]
///   orientation = high_green
///   green_lo = 17.1944
///
/// Missing band ends are infinite. Unknown keys are rejected.
struct Config {
  HyperParams params;
  BandSpec bands;

  bool operator==(const Config&) const = default;
};

/// The configuration compiled in from data/default.conf.
const Config& default_config();

/// Parses `text` over the defaults: keys present override, bands are added
/// or replaced. Throws kBadConfig.
Config parse_config(std::string_view text, const Config& base = default_config());
/// Throws kIoError naming the path when the file cannot be read.
Config load_config(const std::filesystem::path& path);

std::string serialize_config(const Config& config);
void save_config(const std::filesystem::path& path, const Config& config);

/// Shortest round-trip decimal form; "inf"/"-inf" for infinities.
std::string format_number(double v);

}  // namespace dqi

#endif  // DQI_CONFIG_HPP_
