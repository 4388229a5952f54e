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

#ifndef DQI_BUNDLED_HPP_
#define DQI_BUNDLED_HPP_

#include <string_view>

// Data files from data/, compiled in at build time.
namespace dqi::bundled {

extern const std::string_view kStopwords;
extern const std::string_view kStopwordsVersion;
extern const std::string_view kPosLexicon;
extern const std::string_view kTaggerVersion;
extern const std::string_view kSynonyms;
extern const std::string_view kDefaultConfig;

}  // namespace dqi::bundled

#endif  // DQI_BUNDLED_HPP_
