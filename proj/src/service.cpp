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

#include "dqi/service.hpp"

#include <algorithm>
#include <charconv>

#include "dqi/bands.hpp"
#include "dqi/splitkit.hpp"
#include "dqi/viz.hpp"
#include "httplib.h"

namespace dqi {

namespace {

constexpr std::string_view kAnonymous = "anonymous";
constexpr int kMinAcceptedContentWords = 3;

std::string annotator_of(const Sample& s) {
  return s.annotator_id && !s.annotator_id->empty() ? *s.annotator_id
                                                    : std::string(kAnonymous);
}

Sample draft_from(const Json& body) {
  if (body.contains("sample")) return sample_from_json(body.at("sample"));
  return sample_from_json(body);
}

std::vector<PendingEntry>::const_iterator find_pending(const SessionState& s,
                                                       std::string_view id) {
  return std::find_if(s.pending.begin(), s.pending.end(),
                      [&](const PendingEntry& e) { return e.sample.id == id; });
}

bool id_taken(const SessionState& s, std::string_view id) {
  return s.dataset.contains(id) || find_pending(s, id) != s.pending.end();
}

std::string fresh_id(const SessionState& s, std::string_view prefix) {
  for (long k = s.next_sequence;; ++k) {
    std::string id = std::string(prefix) + "-" + std::to_string(k);
    if (!id_taken(s, id)) return id;
  }
}

void refresh_baseline(SessionState& s, const SimilarityProvider& provider) {
  s.baseline = s.dataset.empty()
                   ? nullptr
                   : std::make_shared<const DqiReport>(
                         compute_all(s.dataset, provider, s.config.params));
}

void record(SessionState& s, const std::string& annotator, std::string_view event,
            const std::string& sample_id) {
  s.annotators[annotator].history.push_back(
      {{"sequence", s.next_sequence}, {"event", event}, {"sample", sample_id}});
  ++s.next_sequence;
}

Json panel_body(const SessionState& s, const Sample& draft,
                const SimilarityProvider& provider) {
  const auto values = draft_flag_values(s.dataset, draft, provider, s.config.params,
                                        s.baseline.get());
  const FlagPanel panel = assign_colors(values, s.config.bands);
  Json body;
  body["flags"] = to_json(panel);
  body["values"] = Json::object();
  for (const auto& [k, v] : values) body["values"][k] = v;
  body["band_generation"] = s.band_generation;
  return body;
}

long parse_long(const std::string& name, const std::string& text) {
  long v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw Error(ErrorCode::kInvalidParams, "'" + name + "' expects an integer");
  return v;
}

}  // namespace

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnknownId:
    case ErrorCode::kMissingId:
      return 404;
    case ErrorCode::kDuplicateId:
    case ErrorCode::kNothingToUndo:
    case ErrorCode::kSplitFrozen:
    case ErrorCode::kUnsatisfiableConstraints:
    case ErrorCode::kConstraintViolation:
    case ErrorCode::kEmptyDataset:
    case ErrorCode::kTooFewSentences:
    case ErrorCode::kMissingSplit:
    case ErrorCode::kEmptySide:
    case ErrorCode::kEmptyLexicon:
    case ErrorCode::kMissingBand:
      return 409;
    default:
      return 400;
  }
}

Workbench::Workbench(Dataset dataset, Config config, SimilarityProvider provider,
                     SynonymLexicon lexicon)
    : provider_(std::move(provider)), lexicon_(std::move(lexicon)) {
  auto state = std::make_shared<SessionState>();
  state->dataset = std::move(dataset);
  state->config = std::move(config);
  for (const auto& s : state->dataset.samples()) state->annotators.try_emplace(annotator_of(s));
  refresh_baseline(*state, provider_);
  state_ = std::move(state);
}

std::shared_ptr<const SessionState> Workbench::snapshot() const {
  std::lock_guard lock(publish_mutex_);
  return state_;
}

template <typename Fn>
Json Workbench::mutate(Fn&& fn) {
  std::lock_guard write(write_mutex_);
  auto next = std::make_shared<SessionState>(*snapshot());
  Json body = fn(*next);
  ++next->generation;
  body["generation"] = next->generation;
  std::lock_guard publish(publish_mutex_);
  state_ = std::move(next);
  return body;
}

Json Workbench::review(const Json& draft) const {
  const auto s = snapshot();
  Json body = panel_body(*s, draft_from(draft), provider_);
  body["generation"] = s->generation;
  return body;
}

Json Workbench::submit(const Json& draft) {
  Sample sample = draft_from(draft);
  const bool autofixed = draft.is_object() && draft.value("autofixed", false);
  return mutate([&](SessionState& s) {
    if (sample.id.empty())
      sample.id = fresh_id(s, "sub");
    else if (id_taken(s, sample.id))
      throw Error(ErrorCode::kDuplicateId, "'" + sample.id + "'");
    const std::string who = annotator_of(sample);
    s.pending.push_back({sample, autofixed, s.next_sequence});
    auto& tally = s.annotators[who];
    ++tally.submitted;
    record(s, who, "submitted", sample.id);
    Json body;
    body["id"] = sample.id;
    body["pending"] = s.pending.size();
    return body;
  });
}

Json Workbench::autofix(std::string_view id, const Json& body) {
  const auto s = snapshot();
  const auto it = find_pending(*s, id);
  const bool pending = it != s->pending.end();
  Sample sample;
  if (pending) {
    sample = it->sample;
  } else if (body.is_object() && (body.contains("premise") || body.contains("sample"))) {
    sample = draft_from(body);
    if (sample.id.empty()) sample.id = std::string(id);
  } else {
    throw Error(ErrorCode::kUnknownId, "no pending sample '" + std::string(id) + "'");
  }
  std::optional<int> max_edits;
  if (body.is_object() && body.contains("max_edits")) max_edits = body.at("max_edits").get<int>();
  auto [fixed, trace] = dqi::autofix(sample, s->dataset, provider_, s->config.params,
                                     s->config.bands, lexicon_, max_edits);
  Json out;
  out["sample"] = to_json(fixed);
  out["trace"] = to_json(trace);
  if (!pending) {
    out["generation"] = s->generation;
    return out;
  }
  return mutate([&](SessionState& next) {
    auto pos = find_pending(next, id);
    if (pos == next.pending.end())
      throw Error(ErrorCode::kUnknownId, "no pending sample '" + std::string(id) + "'");
    auto& entry = next.pending[static_cast<std::size_t>(pos - next.pending.begin())];
    if (!trace.edits.empty()) {
      entry.sample = fixed;
      entry.autofixed = true;
      record(next, annotator_of(fixed), "autofixed", fixed.id);
    }
    return out;
  });
}

Json Workbench::next() const {
  const auto s = snapshot();
  Json body;
  body["pending"] = s->pending.size();
  if (s->pending.empty()) {
    body["sample"] = nullptr;
  } else {
    const auto& e = s->pending.front();
    body = panel_body(*s, e.sample, provider_);
    body["pending"] = s->pending.size();
    body["sample"] = to_json(e.sample);
    body["autofixed"] = e.autofixed;
  }
  body["generation"] = s->generation;
  return body;
}

Json Workbench::accept(std::string_view id) {
  return mutate([&](SessionState& s) {
    const auto it = find_pending(s, id);
    if (it == s.pending.end())
      throw Error(ErrorCode::kUnknownId, "no pending sample '" + std::string(id) + "'");
    PendingEntry entry = *it;
    const auto words = content_tokens(tokenize(entry.sample.hypothesis)).size();
    if (words < static_cast<std::size_t>(kMinAcceptedContentWords))
      throw Error(ErrorCode::kConstraintViolation,
                  "hypothesis has " + std::to_string(words) +
                      " content words; at least 3 are required, reject instead");
    if (entry.sample.split == Split::kUnassigned) entry.sample.split = Split::kTrain;
    s.dataset = add_trial_sample(s.dataset, entry.sample);
    s.pending.erase(it);
    const std::string who = annotator_of(entry.sample);
    auto& tally = s.annotators[who];
    ++tally.accepted;
    if (entry.autofixed) ++tally.autofixed;
    record(s, who, "accepted", entry.sample.id);
    refresh_baseline(s, provider_);
    Json body;
    body["id"] = entry.sample.id;
    body["accepted"] = true;
    body["pending"] = s.pending.size();
    body["dataset_size"] = s.dataset.size();
    return body;
  });
}

Json Workbench::reject(std::string_view id) {
  return mutate([&](SessionState& s) {
    const auto it = find_pending(s, id);
    if (it == s.pending.end())
      throw Error(ErrorCode::kUnknownId, "no pending sample '" + std::string(id) + "'");
    const Sample sample = it->sample;
    s.pending.erase(it);
    const std::string who = annotator_of(sample);
    ++s.annotators[who].rejected;
    record(s, who, "rejected", sample.id);
    Json body;
    body["id"] = sample.id;
    body["accepted"] = false;
    body["pending"] = s.pending.size();
    return body;
  });
}

Json Workbench::viz(std::string_view component,
                    const std::map<std::string, std::string>& query) const {
  const auto c = parse_component(component);
  if (!c) throw Error(ErrorCode::kUnknownId, "unknown component '" + std::string(component) + "'");
  const auto s = snapshot();
  VizOptions options;
  if (auto it = query.find("granularity"); it != query.end()) {
    const auto g = parse_granularity(it->second);
    if (!g) throw Error(ErrorCode::kInvalidParams, "unknown granularity '" + it->second + "'");
    options.granularity = *g;
  }
  if (auto it = query.find("bins"); it != query.end())
    options.bins = static_cast<int>(parse_long("bins", it->second));

  const Dataset* base = &s->dataset;
  const Sample* focus = nullptr;
  if (auto it = query.find("sample"); it != query.end()) {
    const auto p = find_pending(*s, it->second);
    if (p != s->pending.end())
      focus = &p->sample;
    else if (s->dataset.contains(it->second))
      options.sample = it->second;
    else
      throw Error(ErrorCode::kUnknownId, "'" + it->second + "'");
  }
  if (!focus && !s->pending.empty()) {
    focus = &s->pending.back().sample;
  } else if (!focus && s->dataset.has_trial()) {
    base = s->dataset.trial_predecessor();
    focus = &s->dataset.samples().back();
  }
  Json body = viz_series(*c, *base, focus, provider_, s->config.params, options);
  body["generation"] = s->generation;
  return body;
}

Json Workbench::randomize_split(const Json& body) {
  std::uint64_t seed = 0;
  SplitRatios ratios;
  if (body.is_object()) {
    seed = body.value("seed", std::uint64_t{0});
    if (body.contains("ratios")) {
      const auto& r = body.at("ratios");
      ratios = {r.value("train", ratios.train), r.value("dev", ratios.dev),
                r.value("test", ratios.test)};
    }
  }
  return mutate([&](SessionState& s) {
    if (s.dataset.split_frozen())
      throw Error(ErrorCode::kSplitFrozen, "split has been saved");
    const auto assignment = dqi::randomize_split(s.dataset, seed, ratios);
    s.dataset = apply_split_tags(s.dataset, assignment.tags);
    refresh_baseline(s, provider_);
    return to_json(assignment);
  });
}

Json Workbench::undo_split() {
  return mutate([&](SessionState& s) {
    s.dataset = dqi::undo_split(s.dataset);
    refresh_baseline(s, provider_);
    Json body;
    body["undone"] = true;
    return body;
  });
}

Json Workbench::save_split() {
  return mutate([&](SessionState& s) {
    s.dataset = dqi::save_split(s.dataset);
    Json body;
    body["frozen"] = true;
    return body;
  });
}

Json Workbench::retune(const Json& body) {
  std::set<std::string> errors;
  double margin = kDefaultSensitivityMargin;
  double factor = kDefaultShrinkFactor;
  if (body.is_object()) {
    if (body.contains("error_ids"))
      for (const auto& id : body.at("error_ids")) errors.insert(id.get<std::string>());
    margin = body.value("margin", margin);
    factor = body.value("factor", factor);
  }
  if (errors.empty()) throw Error(ErrorCode::kNoErrors, "error_ids is empty");
  const auto s = snapshot();
  const auto values = per_sample_values(s->dataset, provider_, s->config.params);
  const auto result = retune_from_errors(errors, values, s->config.bands, margin, factor);
  return mutate([&](SessionState& next) {
    next.config.bands = result.bands;
    ++next.band_generation;
    Json out = to_json(result);
    out["band_generation"] = next.band_generation;
    return out;
  });
}

Json Workbench::annotator_stats(std::string_view id) const {
  const auto s = snapshot();
  const auto it = s->annotators.find(std::string(id));
  if (it == s->annotators.end())
    throw Error(ErrorCode::kUnknownId, "unknown annotator '" + std::string(id) + "'");
  const auto rate = [](const AnnotatorTally& t) {
    const long reviewed = t.accepted + t.rejected;
    return reviewed == 0 ? 0.0 : static_cast<double>(t.accepted) / static_cast<double>(reviewed);
  };
  std::vector<std::pair<double, std::string>> order;
  for (const auto& [name, t] : s->annotators) order.emplace_back(-rate(t), name);
  std::sort(order.begin(), order.end());
  long rank = 1;
  for (const auto& [r, name] : order) {
    if (name == id) break;
    ++rank;
  }
  long pending = 0;
  for (const auto& e : s->pending) pending += annotator_of(e.sample) == id;
  const auto& t = it->second;
  Json body;
  body["annotator"] = std::string(id);
  body["submitted"] = t.submitted;
  body["accepted"] = t.accepted;
  body["rejected"] = t.rejected;
  body["autofixed"] = t.autofixed;
  body["pending"] = pending;
  body["acceptance_rate"] = rate(t);
  body["rank"] = rank;
  body["annotators"] = s->annotators.size();
  body["rates"] = Json::object();
  for (const auto& [name, other] : s->annotators) body["rates"][name] = rate(other);
  body["history"] = t.history;
  body["generation"] = s->generation;
  return body;
}

Json Workbench::trial(const Json& draft) {
  Sample sample = draft_from(draft);
  return mutate([&](SessionState& s) {
    if (sample.id.empty()) sample.id = fresh_id(s, "trial");
    s.dataset = add_trial_sample(s.dataset, sample);
    ++s.next_sequence;
    refresh_baseline(s, provider_);
    Json body;
    body["id"] = sample.id;
    body["dataset_size"] = s.dataset.size();
    return body;
  });
}

Json Workbench::undo_trial() {
  return mutate([&](SessionState& s) {
    s.dataset = dqi::undo_trial(s.dataset);
    refresh_baseline(s, provider_);
    Json body;
    body["dataset_size"] = s.dataset.size();
    return body;
  });
}

Json Workbench::report() const {
  const auto s = snapshot();
  if (!s->baseline) throw Error(ErrorCode::kEmptyDataset, "dataset is empty");
  Json body = to_json(*s->baseline);
  body["generation"] = s->generation;
  return body;
}

Json Workbench::messages() {
  const auto entry = [](const char* title, const char* message) {
    return Json{{"title", title}, {"message", message}};
  };
  Json out;
  out["c1"] = entry("Vocabulary", "Does your sample contribute new words?");
  out["c2"] = entry("Combinations",
                    "Does your sample contribute new combinations of words and phrases?");
  out["c3"] = entry("Sentence Similarity",
                    "How similar is your hypothesis to all other premises or hypotheses?");
  out["c4"] = entry("Word Similarity", "How similar are all the words within your sample?");
  out["c5"] = entry("PH Score", "How similar is your hypothesis to the premise?");
  out["c6"] = entry("Label Giveaway", "Is your hypothesis too obvious for our system?");
  out["c7"] = entry("Sample Similarity", "Is your sample too similar to an existing sample?");
  return out;
}

void mount(httplib::Server& server, Workbench& wb) {
  using Handler = std::function<Json(const httplib::Request&, const Json&)>;
  const auto wrap = [&wb](Handler h) {
    return [&wb, h](const httplib::Request& req, httplib::Response& res) {
      Json out;
      try {
        Json body = Json::object();
        if (!req.body.empty()) {
          try {
            body = Json::parse(req.body);
          } catch (const Json::parse_error& e) {
            throw Error(ErrorCode::kMalformedRecord, std::string("request body: ") + e.what());
          }
        }
        out = h(req, body);
        res.status = 200;
      } catch (const Error& e) {
        res.status = http_status(e.code());
        out = {{"error", to_string(e.code())},
               {"message", e.what()},
               {"generation", wb.snapshot()->generation}};
      } catch (const Json::exception& e) {
        res.status = 400;
        out = {{"error", "MalformedRecord"},
               {"message", e.what()},
               {"generation", wb.snapshot()->generation}};
      }
      res.set_content(out.dump(), "application/json");
    };
  };
  const auto query = [](const httplib::Request& req) {
    std::map<std::string, std::string> q;
    for (const auto& [k, v] : req.params) q[k] = v;
    return q;
  };

  server.Post("/samples/review", wrap([&wb](auto&, const Json& b) { return wb.review(b); }));
  server.Post("/samples/submit", wrap([&wb](auto&, const Json& b) { return wb.submit(b); }));
  server.Post(R"(/samples/([^/]+)/autofix)", wrap([&wb](const httplib::Request& r, const Json& b) {
                return wb.autofix(r.matches[1].str(), b);
              }));
  server.Get("/review/next", wrap([&wb](auto&, const Json&) { return wb.next(); }));
  server.Post(R"(/review/([^/]+)/accept)", wrap([&wb](const httplib::Request& r, const Json&) {
                return wb.accept(r.matches[1].str());
              }));
  server.Post(R"(/review/([^/]+)/reject)", wrap([&wb](const httplib::Request& r, const Json&) {
                return wb.reject(r.matches[1].str());
              }));
  server.Get(R"(/viz/([^/]+))", wrap([&wb, query](const httplib::Request& r, const Json&) {
               return wb.viz(r.matches[1].str(), query(r));
             }));
  server.Post("/split/randomize", wrap([&wb](auto&, const Json& b) { return wb.randomize_split(b); }));
  server.Post("/split/undo", wrap([&wb](auto&, const Json&) { return wb.undo_split(); }));
  server.Post("/split/save", wrap([&wb](auto&, const Json&) { return wb.save_split(); }));
  server.Post("/bands/retune", wrap([&wb](auto&, const Json& b) { return wb.retune(b); }));
  server.Get(R"(/annotators/([^/]+)/stats)", wrap([&wb](const httplib::Request& r, const Json&) {
               return wb.annotator_stats(r.matches[1].str());
             }));
  server.Get("/messages", wrap([](auto&, const Json&) { return Workbench::messages(); }));
  server.Post("/trial", wrap([&wb](auto&, const Json& b) { return wb.trial(b); }));
  server.Post("/trial/undo", wrap([&wb](auto&, const Json&) { return wb.undo_trial(); }));
  server.Get("/report", wrap([&wb](auto&, const Json&) { return wb.report(); }));
}

}  // namespace dqi
