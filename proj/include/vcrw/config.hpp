// Copyright 2026 The vcrw Authors
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

#ifndef VCRW_CONFIG_H_
#define VCRW_CONFIG_H_

#include <string>
#include <vector>

#include "vcrw/model.hpp"
#include "vcrw/sim.hpp"

// Plain-text run configuration.  INI-style sections with key = value lines;
// '#' and ';' start comments.  Unknown sections or keys are rejected with
// the offending line number; missing keys keep their reference defaults.
//
//   [model]      variant m a b L k c L0 phi g
//   [upper_body] L5 m5 I5 KP KD theta5d
//   [sim]        dt duration event_tol omega0 record_stride projection_tol
//                theta_offset
//   [sweep]      phi_min phi_max phi_steps b_list settle_time measure_steps
//   [output]     dir prefix

namespace vcrw {

// Key lookup or value parse failure; carries the 1-based line number
// (0 for command-line overrides).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, const std::string& message)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " +
                                          message
                                    : message),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

struct SweepSpec {
  double phi_min = 0.07;
  double phi_max = 0.17;
  int phi_steps = 11;
  std::vector<double> b_list{0.15, 0.17, 0.19, 0.21, 0.23, 0.25, 0.27, 0.29};
  double settle_time = 100.0;
  int measure_steps = 20;

  std::vector<double> phi_grid() const;
};

struct OutputSpec {
  std::string dir = ".";
  std::string prefix = "vcrw";
};

struct RunConfig {
  ModelParams model;  // variant default vcrw2, Table-reference numbers
  SimConfig sim;
  SweepSpec sweep;
  OutputSpec output;
};

// Parses a config file.  Throws ConfigError (with line number) on unknown
// keys, malformed lines, or unparseable values.
RunConfig load_config(const std::string& path);

// Applies one "key=value" or "section.key=value" override.  Bare keys are
// unambiguous (all key names are distinct across sections).
void apply_override(RunConfig* cfg, const std::string& assignment);

}  // namespace vcrw

#endif  // VCRW_CONFIG_H_
