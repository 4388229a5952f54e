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

#ifndef DQI_SERVICE_HPP_
#define DQI_SERVICE_HPP_

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "dqi/autofix.hpp"
#include "dqi/config.hpp"
#include "dqi/corpus.hpp"
#include "dqi/error.hpp"
#include "dqi/report.hpp"

namespace httplib {
class Server;
}

namespace dqi {

struct PendingEntry {
  Sample sample;
  bool autofixed = false;
  long sequence = 0;
};

struct AnnotatorTally {
  long submitted = 0;
  long accepted = 0;
  long rejected = 0;
  long autofixed = 0;
  std::vector<Json> history;  // {"sequence", "event", "sample"}
};

/// One immutable session snapshot; mutations publish a new one.
struct SessionState {
  Dataset dataset;
  Config config;
  std::uint64_t generation = 0;
  int band_generation = 0;
  std::vector<PendingEntry> pending;
  std::map<std::string, AnnotatorTally> annotators;
  long next_sequence = 1;
  std::shared_ptr<const DqiReport> baseline;  // compute_all(dataset), if non-empty
};

/// The worker/analyst loop behind the HTTP endpoints. Every method returns
/// the JSON response body and throws Error on failure; reads work on a
/// snapshot and never block on a running mutation.
class Workbench {
 public:
  Workbench(Dataset dataset, Config config, SimilarityProvider provider,
            SynonymLexicon lexicon);

  std::shared_ptr<const SessionState> snapshot() const;

  Json review(const Json& draft) const;
  Json submit(const Json& draft);
  Json autofix(std::string_view id, const Json& body);
  Json next() const;
  Json accept(std::string_view id);
  Json reject(std::string_view id);
  Json viz(std::string_view component, const std::map<std::string, std::string>& query) const;
  Json randomize_split(const Json& body);
  Json undo_split();
  Json save_split();
  Json retune(const Json& body);
  Json annotator_stats(std::string_view id) const;
  Json trial(const Json& draft);
  Json undo_trial();
  Json report() const;

  /// Worker-facing tooltip copy per component.
  static Json messages();

 private:
  template <typename Fn>
  Json mutate(Fn&& fn);

  const SimilarityProvider provider_;
  const SynonymLexicon lexicon_;
  mutable std::mutex write_mutex_;
  mutable std::mutex publish_mutex_;
  std::shared_ptr<const SessionState> state_;
};

/// 400 for malformed input, 404 for unknown ids, 409 for constraint
/// violations and state conflicts.
int http_status(ErrorCode code);

/// Registers every endpoint of `workbench` on `server`.
void mount(httplib::Server& server, Workbench& workbench);

}  // namespace dqi

#endif  // DQI_SERVICE_HPP_
