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

#include "dqi/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cmath>
#include <sstream>

#include "dqi/bundled.hpp"
#include "dqi/corpus.hpp"
#include "dqi/error.hpp"

namespace dqi {

namespace {

namespace pt = boost::property_tree;

constexpr std::string_view kBandPrefix = "band:";

[[noreturn]] void bad(const std::string& what) {
  throw Error(ErrorCode::kBadConfig, what);
}

double parse_real(const std::string& key, const std::string& text) {
  if (text == "inf") return kInf;
  if (text == "-inf") return -kInf;
  double v = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v))
    bad("'" + key + "' expects a number, got '" + text + "'");
  return v;
}

long parse_integer(const std::string& key, const std::string& text) {
  long v = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end)
    bad("'" + key + "' expects an integer, got '" + text + "'");
  return v;
}

void read_scalar(HyperParams& p, long& reference_size, const std::string& key,
                 const std::string& v) {
  if (key == "a") p.length_lower = static_cast<int>(parse_integer(key, v));
  else if (key == "b") p.length_upper = static_cast<int>(parse_integer(key, v));
  else if (key == "SIM") p.min_similarity = parse_real(key, v);
  else if (key == "e") p.top_fraction = parse_real(key, v);
  else if (key == "WSIM") p.target_word_similarity = parse_real(key, v);
  else if (key == "ISIM") p.target_pair_similarity = parse_real(key, v);
  else if (key == "g") p.label_frequency_cap = static_cast<int>(parse_integer(key, v));
  else if (key == "SSIM") p.split_overlap = parse_real(key, v);
  else if (key == "sigma_epsilon") p.sigma_epsilon = parse_real(key, v);
  else if (key == "min_granularity_mass") p.min_granularity_mass = parse_integer(key, v);
  else if (key == "overlap_floor") p.overlap_floor = parse_real(key, v);
  else if (key == "reference_size") reference_size = parse_integer(key, v);
  else bad("unknown key '" + key + "'");
}

// A band section replaces any earlier band of the same key entirely.
Band read_band(const std::string& name, const pt::ptree& section) {
  Orientation orientation = Orientation::kCenterGreen;
  BandScaling scaling = BandScaling::kFixed;
  Interval green;
  Interval yellow;
  for (const auto& [key, node] : section) {
    const std::string v = node.data();
    const std::string where = name + "." + key;
    if (key == "orientation") {
      auto o = parse_orientation(v);
      if (!o) bad("'" + where + "': unknown orientation '" + v + "'");
      orientation = *o;
    } else if (key == "scaling") {
      auto s = parse_band_scaling(v);
      if (!s) bad("'" + where + "': unknown scaling '" + v + "'");
      scaling = *s;
    } else if (key == "green_lo") {
      green.lo = parse_real(where, v);
    } else if (key == "green_hi") {
      green.hi = parse_real(where, v);
    } else if (key == "yellow_lo") {
      yellow.lo = parse_real(where, v);
    } else if (key == "yellow_hi") {
      yellow.hi = parse_real(where, v);
    } else {
      bad("unknown key '" + where + "'");
    }
  }
  try {
    return make_band(orientation, green, yellow, scaling);
  } catch (const Error& e) {
    bad("[" + name + "]: " + e.what());
  }
}

std::string strip_hash_comments(std::string_view text) {
  std::string out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string_view::npos || line[first] != '#') out.append(line);
    out.push_back('\n');
    pos = eol + 1;
  }
  return out;
}

}  // namespace

std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

const Config& default_config() {
  static const Config config = [] {
    Config empty;
    return parse_config(bundled::kDefaultConfig, empty);
  }();
  return config;
}

Config parse_config(std::string_view text, const Config& base) {
  pt::ptree tree;
  std::istringstream in(strip_hash_comments(text));
  try {
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    bad("line " + std::to_string(e.line()) + ": " + e.message());
  }
  Config out = base;
  HyperParams& p = out.params;
  for (const auto& [key, node] : tree) {
    if (node.empty()) {
      read_scalar(p, out.bands.reference_size, key, node.data());
      continue;
    }
    if (key.rfind(kBandPrefix, 0) == 0) {
      const std::string band_key = key.substr(kBandPrefix.size());
      if (band_key.empty()) bad("band section without a key");
      out.bands.bands[band_key] = read_band(key, node);
      continue;
    }
    if (key == "aggregate") {
      for (const auto& [ckey, cnode] : node) {
        const auto c = parse_component(ckey);
        if (!c) bad("unknown key 'aggregate." + ckey + "'");
        p.aggregate_weights[*c] = parse_real("aggregate." + ckey, cnode.data());
      }
      continue;
    }
    if (const auto g = parse_granularity(key)) {
      FrequencyBounds b = p.bounds(*g);
      for (const auto& [bkey, bnode] : node) {
        if (bkey == "c") b.lower = static_cast<int>(parse_integer(key + ".c", bnode.data()));
        else if (bkey == "d") b.upper = static_cast<int>(parse_integer(key + ".d", bnode.data()));
        else bad("unknown key '" + key + "." + bkey + "'");
      }
      p.frequency_bounds[*g] = b;
      continue;
    }
    bad("unknown section [" + key + "]");
  }
  if (out.bands.reference_size < 1) bad("reference_size must be positive");
  try {
    p.validate();
  } catch (const Error& e) {
    bad(e.what());
  }
  return out;
}

Config load_config(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const Error& e) {
    throw Error(ErrorCode::kIoError, "cannot read config '" + path.string() + "'");
  }
  try {
    return parse_config(text);
  } catch (const Error& e) {
    throw Error(ErrorCode::kBadConfig, path.string() + ": " + e.what());
  }
}

std::string serialize_config(const Config& config) {
  const HyperParams& p = config.params;
  std::ostringstream out;
  out << "a = " << p.length_lower << "\n"
      << "b = " << p.length_upper << "\n"
      << "SIM = " << format_number(p.min_similarity) << "\n"
      << "e = " << format_number(p.top_fraction) << "\n"
      << "WSIM = " << format_number(p.target_word_similarity) << "\n"
      << "ISIM = " << format_number(p.target_pair_similarity) << "\n"
      << "g = " << p.label_frequency_cap << "\n"
      << "SSIM = " << format_number(p.split_overlap) << "\n"
      << "sigma_epsilon = " << format_number(p.sigma_epsilon) << "\n"
      << "min_granularity_mass = " << p.min_granularity_mass << "\n"
      << "overlap_floor = " << format_number(p.overlap_floor) << "\n"
      << "reference_size = " << config.bands.reference_size << "\n";
  for (const auto g : kAllGranularities) {
    const auto b = p.bounds(g);
    out << "\n[" << to_string(g) << "]\nc = " << b.lower << "\nd = " << b.upper << "\n";
  }
  out << "\n[aggregate]\n";
  for (const auto& [c, w] : p.aggregate_weights)
    out << to_string(c) << " = " << format_number(w) << "\n";
  for (const auto& [key, b] : config.bands.bands) {
    out << "\n[" << kBandPrefix << key << "]\n"
        << "orientation = " << to_string(b.orientation) << "\n";
    if (b.scaling != BandScaling::kFixed) out << "scaling = " << to_string(b.scaling) << "\n";
    if (std::isfinite(b.yellow.lo)) out << "yellow_lo = " << format_number(b.yellow.lo) << "\n";
    if (std::isfinite(b.green.lo)) out << "green_lo = " << format_number(b.green.lo) << "\n";
    if (std::isfinite(b.green.hi)) out << "green_hi = " << format_number(b.green.hi) << "\n";
    if (std::isfinite(b.yellow.hi)) out << "yellow_hi = " << format_number(b.yellow.hi) << "\n";
  }
  return out.str();
}

void save_config(const std::filesystem::path& path, const Config& config) {
  write_file(path, serialize_config(config));
}

}  // namespace dqi
