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

#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "hamlearn/errors.hpp"
#include "hamlearn/experiments.hpp"

namespace hamlearn {

/// Config problem anchored to a line of the input.
class ConfigError : public UsageError {
 public:
  ConfigError(std::size_t line, const std::string& what)
      : UsageError("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Parsed run description.
///
///   # comment
///   [run]
///   seed = 7
///   jobs = 2
///
///   [sweep fig2]
///   source = ground
///   n_sites = 12
///   trials = 20
///
/// Every sweep starts from default_config(source) and inherits the run seed.
struct RunConfig {
  std::uint64_t seed = 1;
  std::size_t jobs = 1;
  std::vector<ExperimentConfig> sweeps;
};

RunConfig parse_config(std::istream& in);
RunConfig parse_config_text(const std::string& text);

}  // namespace hamlearn
