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

#include "dqi/report.hpp"

#include <sstream>

#include "dqi/config.hpp"
#include "dqi/error.hpp"

namespace dqi {

namespace {

Json colors_json(const std::map<std::string, FlagColor>& colors) {
  Json j = Json::object();
  for (const auto& [k, c] : colors) j[k] = to_string(c);
  return j;
}

Json flat_json(const std::map<std::string, double>& flat) {
  Json j = Json::object();
  for (const auto& [k, v] : flat) j[k] = v;
  return j;
}

Json split_map(const std::map<Split, long>& m) {
  Json j = Json::object();
  for (const auto& [s, v] : m) j[std::string(to_string(s))] = v;
  return j;
}

}  // namespace

std::map<std::string, double> flatten(const DqiReport& report) {
  std::map<std::string, double> out;
  for (const auto& [c, r] : report.components) {
    const std::string name(to_string(c));
    out[name] = r.value;
    for (const auto& [k, v] : r.terms) out[name + "." + k] = v;
    for (const auto& [k, g] : r.granularities) {
      out[name + "." + k + ".T1"] = g.t1;
      out[name + "." + k + ".T2"] = g.t2;
    }
  }
  return out;
}

Json to_json(const Sample& s) {
  Json j;
  j["id"] = s.id;
  j["premise"] = s.premise;
  j["hypothesis"] = s.hypothesis;
  j["label"] = to_string(s.label);
  if (s.annotator_id) j["annotator_id"] = *s.annotator_id;
  j["split"] = to_string(s.split);
  return j;
}

Sample sample_from_json(const Json& j) {
  if (!j.is_object()) throw Error(ErrorCode::kMalformedRecord, "sample is not a JSON object");
  const Dataset one = parse_dataset(j.dump(), DatasetFormat::kJsonl);
  Sample s = one.samples().front();
  const auto id = j.find("id");
  if (id == j.end() || id->is_null() || (id->is_string() && s.id == auto_id(0) &&
                                          id->get<std::string>() != s.id))
    s.id.clear();
  return s;
}

Json to_json(const ComponentReport& r) {
  Json j;
  j["component"] = to_string(r.component);
  j["value"] = r.value;
  j["terms"] = Json::object();
  for (const auto& [k, v] : r.terms) j["terms"][k] = v;
  j["granularities"] = Json::object();
  for (const auto& [k, g] : r.granularities) {
    Json gj;
    gj["T1"] = g.t1;
    gj["T2"] = g.t2;
    gj["sigma"] = g.sigma;
    gj["units"] = g.units;
    gj["mass"] = g.mass;
    j["granularities"][k] = gj;
  }
  j["skipped"] = Json::object();
  for (const auto& [k, why] : r.skipped) j["skipped"][k] = why;
  j["warnings"] = r.warnings;
  if (!r.pairs.empty()) {
    j["pairs"] = Json::array();
    for (const auto& p : r.pairs)
      j["pairs"].push_back({{"id", p.id},
                            {"similarity", p.similarity},
                            {"premise_length", p.premise_length},
                            {"hypothesis_length", p.hypothesis_length},
                            {"premise_content", p.premise_content},
                            {"hypothesis_content", p.hypothesis_content},
                            {"overlap_count", p.overlap_count},
                            {"overlap_ratio", p.overlap_ratio},
                            {"word_similarity_sum", p.word_similarity_sum}});
  }
  if (!r.matches.empty()) {
    j["matches"] = Json::array();
    for (const auto& m : r.matches)
      j["matches"].push_back(
          {{"test_id", m.test_id}, {"train_id", m.train_id}, {"similarity", m.similarity}});
  }
  return j;
}

Json to_json(const DqiReport& report) {
  Json j;
  j["aggregate"] = report.aggregate;
  j["stopword_version"] = report.stopword_version;
  j["tagger_version"] = report.tagger_version;
  j["values"] = flat_json(flatten(report));
  j["components"] = Json::object();
  for (const auto& [c, r] : report.components) j["components"][std::string(to_string(c))] = to_json(r);
  return j;
}

Json to_json(const ImpactReport& report) {
  const auto before = flatten(report.before);
  const auto after = flatten(report.after);
  std::map<std::string, double> delta;
  for (const auto& [k, v] : before) {
    const auto it = after.find(k);
    if (it != after.end()) delta[k] = v - it->second;
  }
  Json j;
  j["x1"] = flat_json(before);
  j["x2"] = flat_json(after);
  j["delta"] = flat_json(delta);
  j["aggregate"] = {{"x1", report.before.aggregate},
                    {"x2", report.after.aggregate},
                    {"delta", report.before.aggregate - report.after.aggregate}};
  return j;
}

Json to_json(const FlagPanel& panel) {
  Json j;
  j["colors"] = colors_json(panel.colors);
  j["accept_probability"] = panel.accept_probability;
  j["accept_probability_note"] =
      "heuristic: (2*green + yellow) / (2*flags), not a calibrated estimate";
  return j;
}

Json to_json(const FixTrace& trace) {
  Json j;
  j["status"] = to_string(trace.status);
  j["original_hypothesis"] = trace.original_hypothesis;
  j["initial_colors"] = colors_json(trace.initial_colors);
  j["edits"] = Json::array();
  for (const auto& e : trace.edits)
    j["edits"].push_back({{"position", e.position},
                          {"old", e.old_word},
                          {"new", e.new_word},
                          {"colors", colors_json(e.colors)}});
  return j;
}

Json to_json(const SplitAssignment& a) {
  Json j;
  j["seed"] = a.seed;
  j["annotator_disjoint"] = a.annotator_disjoint;
  j["premise_grouped"] = a.premise_grouped;
  j["within_tolerance"] = a.within_tolerance;
  j["tolerance"] = a.tolerance;
  j["sizes"] = split_map(a.sizes);
  j["targets"] = split_map(a.targets);
  j["ratios"] = Json::object();
  for (const auto& [s, r] : a.achieved_ratios) j["ratios"][std::string(to_string(s))] = r;
  j["assignment"] = Json::object();
  for (const auto& [id, s] : a.tags) j["assignment"][id] = to_string(s);
  return j;
}

Json to_json(const PartitionComparison& c) {
  Json j;
  j["good_size"] = c.good_size;
  j["bad_size"] = c.bad_size;
  j["good"] = to_json(c.good);
  j["bad"] = to_json(c.bad);
  j["winners"] = Json::array();
  for (const auto& r : c.rows)
    j["winners"].push_back({{"component", r.component},
                            {"granularity", r.granularity},
                            {"term", r.term},
                            {"good", r.good},
                            {"bad", r.bad},
                            {"winner", r.winner}});
  return j;
}

Json to_json(const RetuneResult& r) {
  Json j;
  j["sensitive"] = Json::array();
  for (const auto& k : r.sensitive) j["sensitive"].push_back(k);
  j["error_green_fraction"] = flat_json(r.error_green_fraction);
  j["overall_green_fraction"] = flat_json(r.overall_green_fraction);
  j["bands"] = Json::object();
  for (const auto& [k, b] : r.bands.bands) {
    Json bj;
    bj["orientation"] = to_string(b.orientation);
    bj["green"] = {b.green.lo, b.green.hi};
    bj["yellow"] = {b.yellow.lo, b.yellow.hi};
    j["bands"][k] = bj;
  }
  return j;
}

std::string report_csv(const DqiReport& report) {
  std::ostringstream out;
  out << "component,granularity,term,value\n";
  for (const auto& [c, r] : report.components) {
    const auto name = to_string(c);
    out << name << ",,value," << format_number(r.value) << "\n";
    for (const auto& [k, v] : r.terms) out << name << ",," << k << "," << format_number(v) << "\n";
    for (const auto& [k, g] : r.granularities) {
      out << name << "," << k << ",T1," << format_number(g.t1) << "\n";
      out << name << "," << k << ",T2," << format_number(g.t2) << "\n";
    }
  }
  out << "aggregate,,value," << format_number(report.aggregate) << "\n";
  return out.str();
}

}  // namespace dqi
