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

#include "dqi/viz.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "dqi/error.hpp"
#include "dqi/stats.hpp"

namespace dqi {

namespace {

struct Context {
  const SimilarityProvider& provider;
  const HyperParams& params;
  const VizOptions& options;
  const Sample* focus;
};

Json histogram(const std::vector<double>& values, double lo, double hi, int bins,
               bool overflow) {
  std::vector<long> counts(static_cast<std::size_t>(bins) + (overflow ? 1 : 0), 0);
  const double width = (hi - lo) / bins;
  for (const double v : values) {
    if (overflow && v >= hi) {
      ++counts.back();
      continue;
    }
    auto i = static_cast<long>(std::floor((v - lo) / width));
    i = std::clamp(i, 0L, static_cast<long>(bins) - 1);
    ++counts[static_cast<std::size_t>(i)];
  }
  Json out = Json::array();
  for (int i = 0; i < bins; ++i)
    out.push_back({{"key", "bin" + std::to_string(i)},
                   {"lo", lo + i * width},
                   {"hi", lo + (i + 1) * width},
                   {"count", counts[static_cast<std::size_t>(i)]}});
  if (overflow)
    out.push_back({{"key", "overflow"}, {"lo", hi}, {"hi", nullptr}, {"count", counts.back()}});
  return out;
}

// Linear-interpolated quantile of sorted data.
double quantile(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return 0.0;
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto i = static_cast<std::size_t>(std::floor(pos));
  const double frac = pos - static_cast<double>(i);
  if (i + 1 >= sorted.size()) return sorted.back();
  return sorted[i] + frac * (sorted[i + 1] - sorted[i]);
}

std::string sentence_key(const Sample& s, bool hypothesis) {
  return s.id + (hypothesis ? ":h" : ":p");
}

Json c1_series(const Dataset& d, const Context& ctx) {
  Json series;
  std::map<Split, std::pair<std::set<std::string>, long>> per_split;
  std::vector<double> lengths;
  for (const auto& s : d.samples()) {
    auto& [vocab, count] = per_split[s.split];
    ++count;
    for (const auto* text : {&s.premise, &s.hypothesis}) {
      const auto tokens = tokenize(*text);
      lengths.push_back(static_cast<double>(tokens.size()));
      for (auto& w : content_tokens(tokens)) vocab.insert(std::move(w));
    }
  }
  series["vocabulary"] = Json::array();
  for (const auto& [split, vc] : per_split)
    series["vocabulary"].push_back(
        {{"key", to_string(split)},
         {"vocabulary", vc.first.size()},
         {"samples", vc.second},
         {"ratio", static_cast<double>(vc.first.size()) / static_cast<double>(vc.second)}});
  series["length_histogram"] =
      histogram(lengths, 0.0, ctx.params.length_upper, ctx.options.bins, true);
  return series;
}

Json c2_series(const Dataset& d, const Context& ctx) {
  Json series;
  std::map<std::string, long> freq;
  for (const auto& s : d.samples())
    for (auto& u : sample_units(s, ctx.options.granularity)) ++freq[std::move(u)];
  series["frequencies"] = Json::array();
  for (const auto& [u, f] : freq)
    series["frequencies"].push_back({{"key", u}, {"frequency", f}});
  series["bullet"] = Json::array();
  if (!d.empty()) {
    const auto report = compute_c2(d, ctx.params);
    for (const auto g : kAllGranularities) {
      const std::string name(to_string(g));
      const auto it = report.granularities.find(name);
      const auto b = ctx.params.bounds(g);
      series["bullet"].push_back({{"key", name},
                                  {"sigma", it == report.granularities.end() ? 0.0 : it->second.sigma},
                                  {"skipped", it == report.granularities.end()},
                                  {"lower", b.lower},
                                  {"upper", b.upper}});
    }
  }
  return series;
}

Json c3_series(const Dataset& d, const Context& ctx) {
  Json series;
  series["links"] = Json::array();
  series["top_similar"] = Json::array();
  std::vector<TokenSeq> sentences;
  std::vector<std::string> keys;
  for (const auto& s : d.samples()) {
    sentences.push_back(tokenize(s.premise));
    keys.push_back(sentence_key(s, false));
    sentences.push_back(tokenize(s.hypothesis));
    keys.push_back(sentence_key(s, true));
  }
  if (sentences.empty()) return series;
  const SentenceIndex index(sentences, CorpusStats(sentences));
  const Eigen::Index n = index.size();
  constexpr Eigen::Index kBlock = 256;
  for (Eigen::Index first = 0; first < n; first += kBlock) {
    const Eigen::Index count = std::min(kBlock, n - first);
    const Eigen::MatrixXd sim = index.block(first, count);
    for (Eigen::Index i = 0; i < count; ++i) {
      const Eigen::Index l = first + i;
      std::vector<std::pair<double, Eigen::Index>> neighbors;
      for (Eigen::Index m = 0; m < n; ++m) {
        if (m == l) continue;
        neighbors.emplace_back(sim(i, m), m);
        if (m > l && sim(i, m) >= ctx.params.min_similarity)
          series["links"].push_back({{"key", keys[l] + "|" + keys[m]},
                                     {"source", keys[l]},
                                     {"target", keys[m]},
                                     {"similarity", sim(i, m)}});
      }
      const std::size_t k = std::min(ctx.options.top_k, neighbors.size());
      std::partial_sort(neighbors.begin(), neighbors.begin() + static_cast<std::ptrdiff_t>(k),
                        neighbors.end(), [](const auto& a, const auto& b) {
                          return a.first != b.first ? a.first > b.first : a.second < b.second;
                        });
      Json list = Json::array();
      for (std::size_t j = 0; j < k; ++j)
        list.push_back({{"sentence", keys[neighbors[j].second]},
                        {"similarity", neighbors[j].first}});
      series["top_similar"].push_back({{"key", keys[l]}, {"neighbors", list}});
    }
  }
  return series;
}

Json c4_series(const Dataset& d, const Context& ctx) {
  Json series;
  series["treemap"] = Json::array();
  series["heatmap"] = Json::array();
  for (const auto& s : d.samples()) {
    double total = 0.0;
    long pairs = 0;
    for (const auto* text : {&s.premise, &s.hypothesis}) {
      const auto words = content_tokens(tokenize(*text));
      for (std::size_t i = 0; i < words.size(); ++i)
        for (std::size_t j = i + 1; j < words.size(); ++j) {
          total += ctx.provider.word_similarity(words[i], words[j]);
          ++pairs;
        }
    }
    series["treemap"].push_back({{"key", s.id},
                                 {"mean_similarity", pairs ? total / static_cast<double>(pairs) : 0.0},
                                 {"pairs", pairs}});
  }
  const Sample* target = nullptr;
  if (ctx.options.sample) {
    target = d.find(*ctx.options.sample);
    if (!target) throw Error(ErrorCode::kUnknownId, "'" + *ctx.options.sample + "'");
  } else if (ctx.focus) {
    target = d.find(ctx.focus->id);
  } else if (!d.empty()) {
    target = &d.samples().front();
  }
  if (target) {
    TokenSeq words = content_tokens(tokenize(target->premise));
    const auto hyp = content_tokens(tokenize(target->hypothesis));
    words.insert(words.end(), hyp.begin(), hyp.end());
    for (std::size_t i = 0; i < words.size(); ++i)
      for (std::size_t j = 0; j < words.size(); ++j)
        series["heatmap"].push_back({{"key", std::to_string(i) + "," + std::to_string(j)},
                                     {"sample", target->id},
                                     {"row", words[i]},
                                     {"col", words[j]},
                                     {"similarity", ctx.provider.word_similarity(words[i], words[j])}});
  }
  return series;
}

Json c5_series(const Dataset& d, const Context& ctx) {
  Json series;
  std::vector<double> sims;
  series["pairs"] = Json::array();
  if (!d.empty()) {
    const auto report = compute_c5(d, ctx.provider, ctx.params);
    for (const auto& p : report.pairs) {
      sims.push_back(p.similarity);
      series["pairs"].push_back({{"key", p.id}, {"similarity", p.similarity}});
    }
  }
  series["histogram"] = histogram(sims, 0.0, 1.0, ctx.options.bins, false);
  series["density"] = Json::array();
  if (!sims.empty()) {
    double sd = sample_stddev(sims);
    const double n = static_cast<double>(sims.size());
    double h = 1.06 * sd * std::pow(n, -0.2);
    if (!(h > 0.0)) h = 0.05;
    const int points = ctx.options.density_points;
    for (int i = 0; i < points; ++i) {
      const double x = points == 1 ? 0.5 : static_cast<double>(i) / (points - 1);
      double y = 0.0;
      for (const double s : sims) {
        const double z = (x - s) / h;
        y += std::exp(-0.5 * z * z);
      }
      y /= n * h * std::sqrt(2.0 * std::numbers::pi);
      series["density"].push_back({{"key", "x" + std::to_string(i)}, {"x", x}, {"density", y}});
    }
  }
  return series;
}

Json c6_series(const Dataset& d, const Context& ctx) {
  Json series;
  series["points"] = Json::array();
  series["summary"] = Json::array();
  for (const auto label : kAllLabels) {
    std::map<std::string, long> freq;
    for (const auto& s : d.samples())
      if (s.label == label)
        for (auto& u : sample_units(s, ctx.options.granularity)) ++freq[std::move(u)];
    if (freq.empty()) continue;
    const std::string lname(to_string(label));
    std::vector<double> values;
    for (const auto& [u, f] : freq) {
      series["points"].push_back(
          {{"key", lname + "|" + u}, {"label", lname}, {"unit", u}, {"frequency", f}});
      values.push_back(static_cast<double>(f));
    }
    std::sort(values.begin(), values.end());
    series["summary"].push_back({{"key", lname},
                                 {"count", values.size()},
                                 {"min", values.front()},
                                 {"q1", quantile(values, 0.25)},
                                 {"median", quantile(values, 0.5)},
                                 {"q3", quantile(values, 0.75)},
                                 {"max", values.back()}});
  }
  return series;
}

Json c7_series(const Dataset& d, const Context& ctx) {
  Json series;
  series["pairs"] = Json::array();
  try {
    const auto report = compute_c7(d, ctx.provider, ctx.params);
    for (const auto& m : report.matches)
      series["pairs"].push_back({{"key", m.test_id},
                                 {"train_id", m.train_id},
                                 {"similarity", m.similarity}});
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kMissingSplit) throw;
  }
  return series;
}

Json series_of(Component c, const Dataset& d, const Context& ctx) {
  switch (c) {
    case Component::kC1: return c1_series(d, ctx);
    case Component::kC2: return c2_series(d, ctx);
    case Component::kC3: return c3_series(d, ctx);
    case Component::kC4: return c4_series(d, ctx);
    case Component::kC5: return c5_series(d, ctx);
    case Component::kC6: return c6_series(d, ctx);
    case Component::kC7: return c7_series(d, ctx);
  }
  return Json::object();
}

Json diff_keys(const Json& before, const Json& after) {
  std::map<std::string, const Json*> old;
  for (const auto& e : before) old[e["key"].get<std::string>()] = &e;
  Json keys = Json::array();
  for (const auto& e : after) {
    const auto key = e["key"].get<std::string>();
    const auto it = old.find(key);
    if (it == old.end() || *it->second != e) keys.push_back(key);
  }
  return keys;
}

}  // namespace

Json viz_series(Component component, const Dataset& dataset, const Sample* focus,
                const SimilarityProvider& provider, const HyperParams& params,
                const VizOptions& options) {
  if (options.bins < 1 || options.bins > 1000)
    throw Error(ErrorCode::kInvalidParams, "bins must lie in [1, 1000]");
  if (options.density_points < 1 || options.density_points > 10000)
    throw Error(ErrorCode::kInvalidParams, "density_points must lie in [1, 10000]");
  const Context ctx{provider, params, options, focus};
  Json out;
  out["component"] = to_string(component);
  out["focus"] = focus ? Json(focus->id) : Json(nullptr);
  if (component == Component::kC2 || component == Component::kC6)
    out["granularity"] = to_string(options.granularity);
  Json highlighted = Json::object();
  if (!focus) {
    out["series"] = series_of(component, dataset, ctx);
    for (const auto& [name, elems] : out["series"].items()) highlighted[name] = Json::array();
  } else {
    const Dataset with = add_trial_sample(dataset, *focus);
    const Json before = series_of(component, dataset, ctx);
    Json after = series_of(component, with, ctx);
    for (auto& [name, elems] : after.items()) {
      highlighted[name] = diff_keys(before[name], elems);
      if (name == "bullet") {
        std::map<std::string, double> old;
        for (const auto& e : before[name]) old[e["key"].get<std::string>()] = e["sigma"].get<double>();
        for (auto& e : elems) {
          const auto it = old.find(e["key"].get<std::string>());
          e["sigma_before"] = it == old.end() ? Json(nullptr) : Json(it->second);
        }
      }
    }
    out["series"] = std::move(after);
  }
  out["highlighted"] = std::move(highlighted);
  return out;
}

}  // namespace dqi
