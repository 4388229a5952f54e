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

// Command-line front end: batch analysis, comparison, deltas, autofix,
// retuning, split randomization, calibration and the HTTP service.

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <filesystem>
#include <iostream>

#include "dqi/autofix.hpp"
#include "dqi/bands.hpp"
#include "dqi/config.hpp"
#include "dqi/report.hpp"
#include "dqi/service.hpp"
#include "dqi/splitkit.hpp"
#include "httplib.h"

namespace fs = std::filesystem;
using namespace dqi;

namespace {

struct Options {
  std::string dataset;
  std::string config;
  std::string lexicon;
  std::string membership;
  std::string out;
  std::string sample;
  std::string errors;
  std::string reports;
  std::string address = "127.0.0.1:8080";
  std::uint64_t seed = 0;
  int max_edits = 0;
  bool per_sample = false;
};

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("dqi");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* level = std::getenv("DQI_LOG_LEVEL"))
    spdlog::set_level(spdlog::level::from_str(level));
}

Config config_of(const Options& o) {
  return o.config.empty() ? default_config() : load_config(o.config);
}

Dataset dataset_of(const Options& o) {
  spdlog::info("loading {}", o.dataset);
  return load_dataset(o.dataset, format_from_path(o.dataset));
}

SynonymLexicon lexicon_of(const Options& o) {
  return o.lexicon.empty() ? SynonymLexicon::bundled() : SynonymLexicon::load(o.lexicon);
}

void emit(const Options& o, const std::string& default_name, const std::string& content) {
  if (o.out.empty()) {
    std::cout << content;
    return;
  }
  fs::path path = o.out;
  if (fs::is_directory(path)) path /= default_name;
  write_file(path, content);
  spdlog::info("wrote {}", path.string());
}

Sample read_sample(const std::string& path) {
  try {
    return sample_from_json(Json::parse(read_file(path)));
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kMalformedRecord, path + ": " + e.what());
  }
}

int run_analyze(const Options& o) {
  const Config cfg = config_of(o);
  const Dataset data = dataset_of(o);
  const auto provider = SimilarityProvider::lexical();
  const DqiReport report = compute_all(data, provider, cfg.params);
  const fs::path dir = o.out.empty() ? fs::path(".") : fs::path(o.out);
  fs::create_directories(dir);
  write_file(dir / "report.json", to_json(report).dump(2) + "\n");
  write_file(dir / "report.csv", report_csv(report));
  if (o.per_sample) {
    const auto values = per_sample_values(data, provider, cfg.params);
    Json j = Json::object();
    for (const auto& [id, vals] : values) {
      Json v = Json::object();
      for (const auto& [k, x] : vals) v[k] = x;
      j[id] = v;
    }
    write_file(dir / "per_sample.json", j.dump(2) + "\n");
  }
  spdlog::info("aggregate {}", report.aggregate);
  return 0;
}

int run_compare(const Options& o) {
  const Config cfg = config_of(o);
  const Dataset data = dataset_of(o);
  const auto membership = load_partition(o.membership, data);
  const auto cmp = compare_partitions(data, membership, SimilarityProvider::lexical(), cfg.params);
  const fs::path dir = o.out.empty() ? fs::path(".") : fs::path(o.out);
  fs::create_directories(dir);
  write_file(dir / "comparison.json", to_json(cmp).dump(2) + "\n");
  write_file(dir / "comparison.csv", comparison_csv(cmp));
  return 0;
}

int run_delta(const Options& o) {
  const Config cfg = config_of(o);
  const Dataset data = dataset_of(o);
  Sample draft = read_sample(o.sample);
  if (draft.id.empty()) draft.id = "draft";
  const auto provider = SimilarityProvider::lexical();
  Json j = to_json(impact(data, draft, provider, cfg.params));
  j["flags"] = to_json(assign_colors(draft_flag_values(data, draft, provider, cfg.params),
                                     cfg.bands));
  emit(o, "delta.json", j.dump(2) + "\n");
  return 0;
}

int run_autofix(const Options& o) {
  const Config cfg = config_of(o);
  const Dataset data = dataset_of(o);
  Sample draft = read_sample(o.sample);
  if (draft.id.empty()) draft.id = "draft";
  std::optional<int> max_edits;
  if (o.max_edits > 0) max_edits = o.max_edits;
  auto [fixed, trace] = autofix(draft, data, SimilarityProvider::lexical(), cfg.params,
                                cfg.bands, lexicon_of(o), max_edits);
  Json j;
  j["sample"] = to_json(fixed);
  j["trace"] = to_json(trace);
  emit(o, "autofix.json", j.dump(2) + "\n");
  return 0;
}

std::set<std::string> read_error_ids(const std::string& path) {
  std::set<std::string> ids;
  const std::string text = read_file(path);
  std::size_t pos = 0;
  bool first = true;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string::npos) eol = text.size();
    std::string line = text.substr(pos, eol - pos);
    pos = eol + 1;
    if (const auto comma = line.find(','); comma != std::string::npos) line.resize(comma);
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    const bool header = first && line == "id";
    first = false;
    if (!line.empty() && !header) ids.insert(line);
  }
  return ids;
}

int run_retune(const Options& o) {
  Config cfg = config_of(o);
  const auto errors = read_error_ids(o.errors);
  if (errors.empty()) throw Error(ErrorCode::kNoErrors, o.errors + " lists no sample ids");
  const fs::path values_path = fs::path(o.reports) / "per_sample.json";
  SampleValues values;
  try {
    const Json j = Json::parse(read_file(values_path));
    for (const auto& [id, vals] : j.items())
      for (const auto& [k, v] : vals.items()) values[id][k] = v.get<double>();
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kMalformedRecord, values_path.string() + ": " + e.what());
  }
  const auto result = retune_from_errors(errors, values, cfg.bands);
  cfg.bands = result.bands;
  emit(o, "retuned.conf", serialize_config(cfg));
  for (const auto& key : result.sensitive) spdlog::info("sensitive: {}", key);
  return 0;
}

int run_split(const Options& o) {
  const Dataset data = dataset_of(o);
  const auto assignment = randomize_split(data, o.seed);
  emit(o, "split.csv", split_csv(data, assignment));
  if (!assignment.within_tolerance) spdlog::warn("split sizes fall outside the tolerance");
  return 0;
}

int run_calibrate(const Options& o) {
  Config cfg = config_of(o);
  const Dataset data = dataset_of(o);
  const BandSpec calibrated = calibrate_bands(data, SimilarityProvider::lexical(), cfg.params);
  for (const auto& [k, b] : calibrated.bands) cfg.bands.bands[k] = b;
  cfg.bands.reference_size = calibrated.reference_size;
  emit(o, "calibrated.conf", serialize_config(cfg));
  return 0;
}

int run_serve(const Options& o) {
  const auto colon = o.address.rfind(':');
  if (colon == std::string::npos)
    throw Error(ErrorCode::kInvalidParams, "address must be host:port");
  const std::string host = o.address.substr(0, colon);
  const int port = std::stoi(o.address.substr(colon + 1));
  Workbench wb(o.dataset.empty() ? Dataset() : dataset_of(o), config_of(o),
               SimilarityProvider::lexical(), lexicon_of(o));
  httplib::Server server;
  mount(server, wb);
  spdlog::warn("listening on {}:{}", host, port);
  if (!server.listen(host, port))
    throw Error(ErrorCode::kIoError, "cannot listen on " + o.address);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  CLI::App app{"DQI workbench: dataset quality analysis for NLI corpora"};
  app.require_subcommand(1);
  Options o;

  const auto dataset = [&](CLI::App* cmd, bool required = true) {
    auto* opt = cmd->add_option("--dataset", o.dataset, "JSONL or TSV dataset");
    if (required) opt->required();
  };
  const auto config = [&](CLI::App* cmd) {
    cmd->add_option("--config", o.config, "configuration file (default: bundled)");
  };
  const auto out = [&](CLI::App* cmd, const char* what) { cmd->add_option("--out", o.out, what); };

  auto* analyze = app.add_subcommand("analyze", "compute all components");
  dataset(analyze);
  config(analyze);
  out(analyze, "output directory (report.json, report.csv)");
  analyze->add_flag("--per-sample", o.per_sample, "also write per_sample.json flag values");

  auto* compare = app.add_subcommand("compare", "compare good and bad partitions");
  dataset(compare);
  config(compare);
  compare->add_option("--membership", o.membership, "id,good|bad CSV")->required();
  out(compare, "output directory (comparison.json, comparison.csv)");

  auto* delta = app.add_subcommand("delta", "impact of adding one sample");
  dataset(delta);
  config(delta);
  delta->add_option("--sample", o.sample, "sample JSON file")->required();
  out(delta, "output file (default: stdout)");

  auto* fix = app.add_subcommand("autofix", "rewrite a sample's hypothesis toward green");
  dataset(fix);
  config(fix);
  fix->add_option("--sample", o.sample, "sample JSON file")->required();
  fix->add_option("--lexicon", o.lexicon, "synonym lexicon (default: bundled)");
  fix->add_option("--max-edits", o.max_edits, "edit budget (default: content length)");
  out(fix, "output file (default: stdout)");

  auto* retune = app.add_subcommand("retune", "shrink green bands of sensitive components");
  config(retune);
  retune->add_option("--errors", o.errors, "CSV of misclassified sample ids")->required();
  retune->add_option("--reports", o.reports, "directory holding per_sample.json")->required();
  out(retune, "new configuration file (default: stdout)");

  auto* split = app.add_subcommand("split", "randomize train/dev/test assignment");
  dataset(split);
  split->add_option("--seed", o.seed, "random seed");
  out(split, "id,split CSV (default: stdout)");

  auto* calibrate = app.add_subcommand("calibrate", "derive component bands from a dataset");
  dataset(calibrate);
  config(calibrate);
  out(calibrate, "configuration file (default: stdout)");

  auto* serve = app.add_subcommand("serve", "run the HTTP service");
  dataset(serve, false);
  config(serve);
  serve->add_option("--lexicon", o.lexicon, "synonym lexicon (default: bundled)");
  serve->add_option("--address", o.address, "host:port");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*analyze) return run_analyze(o);
    if (*compare) return run_compare(o);
    if (*delta) return run_delta(o);
    if (*fix) return run_autofix(o);
    if (*retune) return run_retune(o);
    if (*split) return run_split(o);
    if (*calibrate) return run_calibrate(o);
    if (*serve) return run_serve(o);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
