// Copyright 2026 The twcv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "twcv/cli/config.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace twcv::cli {
namespace {

constexpr std::array<std::string_view, 28> kKeys = {
    "protocol.V_A",        "protocol.V_B",         "protocol.T_A",
    "protocol.beta",       "channel.loss",         "channel.distance",
    "channel.epsilon",     "detector.kind",        "detector.eta",
    "detector.v_el",       "amplifier.kind",       "amplifier.gain",
    "amplifier.noise",     "sweep.variable",       "sweep.start",
    "sweep.stop",          "sweep.step",           "surface.gain_start",
    "surface.gain_stop",   "surface.gain_step",    "surface.distance_start",
    "surface.distance_stop", "surface.distance_step", "montecarlo.seed",
    "montecarlo.samples",  "montecarlo.partitions", "output.path",
    "configs.<label>",
};

constexpr std::string_view kConfigsPrefix = "configs.";

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::string strip_quotes(std::string s) {
  if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front()) {
    return s.substr(1, s.size() - 2);
  }
  return s;
}

[[noreturn]] void fail(std::string_view key, std::string_view message) {
  throw ConfigError(std::string(key) + ": " + std::string(message));
}

double to_double(std::string_view key, std::string_view text) {
  double v = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last || !std::isfinite(v)) {
    fail(key, "expected a finite number, got '" + std::string(text) + "'");
  }
  return v;
}

std::uint64_t to_uint(std::string_view key, std::string_view text) {
  std::uint64_t v = 0;
  const auto* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), last, v);
  if (ec != std::errc{} || ptr != last) {
    fail(key, "expected a non-negative integer, got '" + std::string(text) + "'");
  }
  return v;
}

double at_least(std::string_view key, std::string_view text, double lo) {
  const double v = to_double(key, text);
  if (v < lo) {
    std::ostringstream os;
    os << "must be >= " << lo << ", got " << v;
    fail(key, os.str());
  }
  return v;
}

double unit_interval(std::string_view key, std::string_view text, bool open_low) {
  const double v = to_double(key, text);
  const bool ok = open_low ? (v > 0.0 && v <= 1.0) : (v >= 0.0 && v <= 1.0);
  if (!ok) {
    std::ostringstream os;
    os << "must lie in " << (open_low ? "(0, 1]" : "[0, 1]") << ", got " << v;
    fail(key, os.str());
  }
  return v;
}

double positive(std::string_view key, std::string_view text) {
  const double v = to_double(key, text);
  if (!(v > 0.0)) {
    std::ostringstream os;
    os << "must be > 0, got " << v;
    fail(key, os.str());
  }
  return v;
}

DetectionKind to_detection(std::string_view key, std::string_view text) {
  if (text == "homodyne") return DetectionKind::homodyne;
  if (text == "heterodyne") return DetectionKind::heterodyne;
  fail(key, "must be one of homodyne|heterodyne, got '" + std::string(text) + "'");
}

AmplifierKind to_amplifier(std::string_view key, std::string_view text) {
  if (text == "none") return AmplifierKind::none;
  if (text == "psa") return AmplifierKind::psa;
  if (text == "pia") return AmplifierKind::pia;
  fail(key, "must be one of none|psa|pia, got '" + std::string(text) + "'");
}

SweepVariable to_variable(std::string_view key, std::string_view text) {
  if (text == "distance") return SweepVariable::distance;
  if (text == "gain") return SweepVariable::gain;
  if (text == "noise") return SweepVariable::inherent_noise;
  fail(key, "must be one of distance|gain|noise, got '" + std::string(text) + "'");
}

using Setter = std::function<void(RunConfig&, std::string_view key, std::string_view value)>;

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"protocol.V_A", [](RunConfig& c, auto k, auto v) { c.params.alice_variance = at_least(k, v, 1.0); }},
      {"protocol.V_B", [](RunConfig& c, auto k, auto v) { c.params.bob_variance = at_least(k, v, 1.0); }},
      {"protocol.T_A", [](RunConfig& c, auto k, auto v) { c.params.alice_transmittance = unit_interval(k, v, true); }},
      {"protocol.beta", [](RunConfig& c, auto k, auto v) { c.params.reconciliation_efficiency = unit_interval(k, v, false); }},
      {"channel.loss", [](RunConfig& c, auto k, auto v) { c.params.channel.loss_db_per_km = at_least(k, v, 0.0); }},
      {"channel.distance", [](RunConfig& c, auto k, auto v) { c.params.channel.distance_km = at_least(k, v, 0.0); }},
      {"channel.epsilon", [](RunConfig& c, auto k, auto v) { c.params.channel.excess_noise = at_least(k, v, 0.0); }},
      {"detector.kind", [](RunConfig& c, auto k, auto v) { c.params.detector.kind = to_detection(k, v); }},
      {"detector.eta", [](RunConfig& c, auto k, auto v) { c.params.detector.efficiency = unit_interval(k, v, true); }},
      {"detector.v_el", [](RunConfig& c, auto k, auto v) { c.params.detector.electronic_noise = at_least(k, v, 0.0); }},
      {"amplifier.kind", [](RunConfig& c, auto k, auto v) { c.params.amplifier.kind = to_amplifier(k, v); }},
      {"amplifier.gain", [](RunConfig& c, auto k, auto v) { c.params.amplifier.gain = at_least(k, v, 1.0); }},
      {"amplifier.noise", [](RunConfig& c, auto k, auto v) { c.params.amplifier.inherent_noise = at_least(k, v, 1.0); }},
      {"sweep.variable", [](RunConfig& c, auto k, auto v) { c.sweep_variable = to_variable(k, v); }},
      {"sweep.start", [](RunConfig& c, auto k, auto v) { c.sweep_range.start = to_double(k, v); }},
      {"sweep.stop", [](RunConfig& c, auto k, auto v) { c.sweep_range.stop = to_double(k, v); }},
      {"sweep.step", [](RunConfig& c, auto k, auto v) { c.sweep_range.step = positive(k, v); }},
      {"surface.gain_start", [](RunConfig& c, auto k, auto v) { c.surface_gains.start = at_least(k, v, 1.0); }},
      {"surface.gain_stop", [](RunConfig& c, auto k, auto v) { c.surface_gains.stop = at_least(k, v, 1.0); }},
      {"surface.gain_step", [](RunConfig& c, auto k, auto v) { c.surface_gains.step = positive(k, v); }},
      {"surface.distance_start", [](RunConfig& c, auto k, auto v) { c.surface_distances.start = at_least(k, v, 0.0); }},
      {"surface.distance_stop", [](RunConfig& c, auto k, auto v) { c.surface_distances.stop = at_least(k, v, 0.0); }},
      {"surface.distance_step", [](RunConfig& c, auto k, auto v) { c.surface_distances.step = positive(k, v); }},
      {"montecarlo.seed", [](RunConfig& c, auto k, auto v) { c.seed = to_uint(k, v); }},
      {"montecarlo.samples", [](RunConfig& c, auto k, auto v) {
         c.samples = static_cast<std::size_t>(to_uint(k, v));
         if (c.samples < 2) fail(k, "must be >= 2");
       }},
      {"montecarlo.partitions", [](RunConfig& c, auto k, auto v) {
         const auto p = to_uint(k, v);
         if (p < 1 || p > 1024) fail(k, "must lie in [1, 1024]");
         c.partitions = static_cast<unsigned>(p);
       }},
      {"output.path", [](RunConfig& c, auto, auto v) { c.output_path = std::string(v); }},
  };
  return table;
}

// Flat "section.key" -> value map, in file order for configs entries.
struct FlatConfig {
  std::vector<std::pair<std::string, std::string>> entries;

  void set(std::string key, std::string value) {
    const auto it = std::find_if(entries.begin(), entries.end(),
                                 [&](const auto& e) { return e.first == key; });
    if (it != entries.end()) {
      it->second = std::move(value);
    } else {
      entries.emplace_back(std::move(key), std::move(value));
    }
  }
};

FlatConfig flatten(std::string_view text) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream in{std::string(text)};
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("malformed configuration: ") + e.what());
  }
  FlatConfig flat;
  for (const auto& [section, body] : tree) {
    if (body.empty()) {
      throw ConfigError(section + ": keys must appear inside a [section]");
    }
    for (const auto& [key, value] : body) {
      flat.set(section + "." + key, strip_quotes(trim(value.data())));
    }
  }
  return flat;
}

RunConfig resolve(const FlatConfig& flat) {
  RunConfig config;
  for (const auto& [key, value] : flat.entries) {
    if (key.starts_with(kConfigsPrefix)) {
      const auto label = key.substr(kConfigsPrefix.size());
      if (label.empty()) fail(key, "configuration label must not be empty");
      config.configurations.push_back(parse_configuration(label, value));
      continue;
    }
    const auto it = setters().find(key);
    if (it == setters().end()) fail(key, "unknown key");
    it->second(config, key, value);
  }
  try {
    config.sweep_range.validate();
  } catch (const DomainError& e) {
    fail("sweep", e.what());
  }
  try {
    config.surface_gains.validate();
    config.surface_distances.validate();
  } catch (const DomainError& e) {
    fail("surface", e.what());
  }
  try {
    config.params.validate();
  } catch (const DomainError& e) {
    throw ConfigError(std::string("inconsistent parameters: ") + e.what());
  }
  return config;
}

}  // namespace

std::vector<Configuration> RunConfig::comparison_set() const {
  return configurations.empty() ? default_configurations(params.detector.kind) : configurations;
}

std::span<const std::string_view> known_keys() {
  return kKeys;
}

Override parse_override(std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw ConfigError("--set expects KEY=VALUE, got '" + std::string(assignment) + "'");
  }
  auto key = trim(assignment.substr(0, eq));
  if (key.empty()) throw ConfigError("--set expects KEY=VALUE with a non-empty key");
  return {std::move(key), strip_quotes(trim(assignment.substr(eq + 1)))};
}

Configuration parse_configuration(std::string label, std::string_view fields) {
  const std::string key = std::string(kConfigsPrefix) + label;
  Configuration c{std::move(label), {}, std::nullopt, std::nullopt};
  std::istringstream tokens{std::string(fields)};
  std::string token;
  while (tokens >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) fail(key, "expected name=value tokens, got '" + token + "'");
    const std::string name = token.substr(0, eq);
    const std::string value = token.substr(eq + 1);
    const std::string sub = key + "." + name;
    if (name == "kind") {
      c.amplifier.kind = to_amplifier(sub, value);
    } else if (name == "gain") {
      c.amplifier.gain = at_least(sub, value, 1.0);
    } else if (name == "noise") {
      c.amplifier.inherent_noise = at_least(sub, value, 1.0);
    } else if (name == "eta") {
      c.efficiency = unit_interval(sub, value, true);
    } else if (name == "v_el") {
      c.electronic_noise = at_least(sub, value, 0.0);
    } else {
      fail(sub, "unknown configuration field (expected kind, gain, noise, eta, v_el)");
    }
  }
  return c;
}

RunConfig parse_config_text(std::string_view text, std::span<const Override> overrides) {
  FlatConfig flat = flatten(text);
  for (const auto& [key, value] : overrides) flat.set(key, value);
  return resolve(flat);
}

RunConfig parse_config(const std::optional<std::filesystem::path>& file,
                       std::span<const Override> overrides) {
  std::string text;
  if (file) {
    std::ifstream in(*file, std::ios::binary);
    if (!in) throw ConfigError("cannot open configuration file '" + file->string() + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    text = buffer.str();
  }
  return parse_config_text(text, overrides);
}

}  // namespace twcv::cli
