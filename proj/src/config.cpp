// Copyright 2026 The hamlearn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "hamlearn/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <istream>
#include <map>
#include <set>
#include <sstream>

namespace hamlearn {

namespace {

struct Entry {
  std::string value;
  std::size_t line = 0;
};

struct Section {
  std::string name;
  std::size_t line = 0;
  std::map<std::string, Entry> entries;
};

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> words(const std::string& text) {
  std::string spaced = text;
  std::replace(spaced.begin(), spaced.end(), ',', ' ');
  std::istringstream in(spaced);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

double to_double(const Entry& e, const std::string& key) {
  std::istringstream in(e.value);
  double v = 0.0;
  in >> v;
  if (in.fail() || !in.eof()) {
    throw ConfigError(e.line, key + " expects a number, got '" + e.value + "'");
  }
  return v;
}

std::uint64_t to_uint(const std::string& text, std::size_t line, const std::string& key) {
  std::uint64_t v = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError(line, key + " expects a non-negative integer, got '" + text + "'");
  }
  return v;
}

std::uint64_t to_uint(const Entry& e, const std::string& key) {
  return to_uint(e.value, e.line, key);
}

std::vector<double> to_doubles(const Entry& e, const std::string& key) {
  std::vector<double> out;
  for (const auto& w : words(e.value)) out.push_back(to_double(Entry{w, e.line}, key));
  if (out.empty()) throw ConfigError(e.line, key + " needs at least one value");
  return out;
}

ExperimentConfig build_sweep(const Section& s, std::uint64_t seed) {
  const auto src = s.entries.find("source");
  if (src == s.entries.end()) {
    throw ConfigError(s.line, "sweep '" + s.name + "' has no source");
  }
  ExperimentConfig cfg;
  try {
    cfg = default_config(parse_source(src->second.value));
  } catch (const UsageError& e) {
    throw ConfigError(src->second.line, e.what());
  }
  cfg.name = s.name;
  cfg.seed = seed;
  for (const auto& [key, e] : s.entries) {
    if (key == "source") continue;
    if (key == "model") {
      try {
        cfg.model = parse_model(e.value);
      } catch (const UsageError& err) {
        throw ConfigError(e.line, err.what());
      }
    } else if (key == "n_sites") {
      cfg.n_sites = to_uint(e, key);
    } else if (key == "region_size") {
      cfg.region_size = to_uint(e, key);
    } else if (key == "locality") {
      cfg.locality = to_uint(e, key);
    } else if (key == "trials") {
      cfg.trials = to_uint(e, key);
    } else if (key == "epsilon") {
      cfg.epsilon = to_double(e, key);
    } else if (key == "prefix_stride") {
      cfg.prefix_stride = to_uint(e, key);
    } else if (key == "betas") {
      cfg.betas = to_doubles(e, key);
    } else if (key == "temperature_min") {
      cfg.temperature_min = to_double(e, key);
    } else if (key == "temperature_max") {
      cfg.temperature_max = to_double(e, key);
    } else if (key == "max_states") {
      cfg.max_states = to_uint(e, key);
    } else if (key == "dt") {
      cfg.dt = to_double(e, key);
    } else if (key == "t_min") {
      cfg.t_min = to_double(e, key);
    } else if (key == "t_max") {
      cfg.t_max = to_double(e, key);
    } else if (key == "checkpoints") {
      cfg.checkpoints = to_uint(e, key);
    } else if (key == "time_average") {
      if (e.value == "trapezoid") {
        cfg.time_average = TimeAverage::kTrapezoid;
      } else if (e.value == "grid-mean") {
        cfg.time_average = TimeAverage::kGridMean;
      } else {
        throw ConfigError(e.line, "time_average is 'trapezoid' or 'grid-mean'");
      }
    } else if (key == "drive_amplitude") {
      cfg.drive_amplitude = to_double(e, key);
    } else if (key == "drive_omega") {
      cfg.drive_omega = to_double(e, key);
    } else if (key == "region_sizes") {
      cfg.region_sizes.clear();
      for (const auto& w : words(e.value)) cfg.region_sizes.push_back(to_uint(w, e.line, key));
      if (cfg.region_sizes.empty()) throw ConfigError(e.line, key + " needs a value");
    } else if (key == "max_sites") {
      cfg.limits.max_sites = to_uint(e, key);
    } else {
      throw ConfigError(e.line, "unknown key '" + key + "' in sweep '" + s.name + "'");
    }
  }
  try {
    cfg.validate();
  } catch (const ResourceError&) {
    throw;
  } catch (const UsageError& err) {
    throw ConfigError(s.line, err.what());
  }
  return cfg;
}

}  // namespace

RunConfig parse_config(std::istream& in) {
  Section run{"run", 0, {}};
  std::vector<Section> sweeps;
  Section* current = nullptr;
  std::set<std::string> names;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string text = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (text.empty()) continue;
    if (text.front() == '[') {
      if (text.back() != ']') throw ConfigError(line, "unterminated section header");
      const auto parts = words(text.substr(1, text.size() - 2));
      if (parts.size() == 1 && parts[0] == "run") {
        current = &run;
        run.line = line;
      } else if (parts.size() == 2 && parts[0] == "sweep") {
        const bool plain = std::all_of(parts[1].begin(), parts[1].end(), [](char c) {
          return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_';
        });
        if (!plain) {
          throw ConfigError(line, "sweep names use letters, digits, '-' and '_'");
        }
        if (!names.insert(parts[1]).second) {
          throw ConfigError(line, "duplicate sweep '" + parts[1] + "'");
        }
        sweeps.push_back(Section{parts[1], line, {}});
        current = &sweeps.back();
      } else {
        throw ConfigError(line, "expected [run] or [sweep NAME]");
      }
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw ConfigError(line, "expected key = value");
    if (current == nullptr) throw ConfigError(line, "key outside of a section");
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    if (key.empty() || value.empty()) throw ConfigError(line, "empty key or value");
    if (!current->entries.emplace(key, Entry{value, line}).second) {
      throw ConfigError(line, "duplicate key '" + key + "'");
    }
  }

  RunConfig out;
  for (const auto& [key, e] : run.entries) {
    if (key == "seed") {
      out.seed = to_uint(e, key);
    } else if (key == "jobs") {
      out.jobs = to_uint(e, key);
      if (out.jobs < 1) throw ConfigError(e.line, "jobs must be at least 1");
    } else {
      throw ConfigError(e.line, "unknown key '" + key + "' in [run]");
    }
  }
  if (sweeps.empty()) throw ConfigError(line, "config defines no [sweep NAME] section");
  for (const auto& s : sweeps) out.sweeps.push_back(build_sweep(s, out.seed));
  return out;
}

RunConfig parse_config_text(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

}  // namespace hamlearn
