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

#ifndef DQI_REPORT_HPP_
#define DQI_REPORT_HPP_

#include <map>
#include <string>

#include "dqi/autofix.hpp"
#include "dqi/bands.hpp"
#include "dqi/corpus.hpp"
#include "dqi/engine.hpp"
#include "dqi/splitkit.hpp"
#include "json.hpp"

namespace dqi {

using Json = nlohmann::ordered_json;

/// Flat view with stable keys: "c1", "c1.T1", "c2.words.T1", "c2.words.T2",
/// "c6.entailment.T3", ... Skipped granularities are absent.
std::map<std::string, double> flatten(const DqiReport& report);

Json to_json(const Sample& sample);
/// Throws kMalformedRecord / kUnknownLabel / kInvalidSample. A missing id
/// is left empty.
Sample sample_from_json(const Json& j);

Json to_json(const ComponentReport& report);
Json to_json(const DqiReport& report);
Json to_json(const ImpactReport& report);
Json to_json(const FlagPanel& panel);
Json to_json(const FixTrace& trace);
Json to_json(const SplitAssignment& assignment);
Json to_json(const PartitionComparison& comparison);
Json to_json(const RetuneResult& result);

/// `component,granularity,term,value` rows of the flat view.
std::string report_csv(const DqiReport& report);

}  // namespace dqi

#endif  // DQI_REPORT_HPP_
