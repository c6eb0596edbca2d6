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

#include "vcrw/config.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace vcrw {

namespace {

std::string trim(const std::string& s) {
  size_t first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  size_t last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

double parse_double(const std::string& value, int line) {
  const char* begin = value.c_str();
  char* end = nullptr;
  const double x = std::strtod(begin, &end);
  if (end == begin || *end != '\0') {
    throw ConfigError(line, "expected a number, got '" + value + "'");
  }
  return x;
}

int parse_int(const std::string& value, int line) {
  const double x = parse_double(value, line);
  const int i = static_cast<int>(x);
  if (static_cast<double>(i) != x) {
    throw ConfigError(line, "expected an integer, got '" + value + "'");
  }
  return i;
}

std::vector<double> parse_list(const std::string& value, int line) {
  std::vector<double> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) {
      throw ConfigError(line, "empty entry in list '" + value + "'");
    }
    out.push_back(parse_double(item, line));
  }
  if (out.empty()) throw ConfigError(line, "empty list");
  return out;
}

// Applies one key in one section; returns false when the key is unknown
// there.
bool apply_key(RunConfig* cfg, const std::string& section,
               const std::string& key, const std::string& value, int line) {
  auto num = [&]() { return parse_double(value, line); };

  if (section == "model") {
    if (key == "variant") {
      try {
        cfg->model.variant = variant_from_string(value);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(line, e.what());
      }
      return true;
    }
    if (key == "m") { cfg->model.m.fill(num()); return true; }
    if (key == "a") { cfg->model.a.fill(num()); return true; }
    if (key == "b") { cfg->model.b.fill(num()); return true; }
    if (key == "L") { cfg->model.L.fill(num()); return true; }
    if (key == "k") { cfg->model.k = num(); return true; }
    if (key == "c") { cfg->model.c = num(); return true; }
    if (key == "L0") { cfg->model.L0 = num(); return true; }
    if (key == "phi") { cfg->model.phi = num(); return true; }
    if (key == "g") { cfg->model.g = num(); return true; }
    return false;
  }
  if (section == "upper_body") {
    if (key == "L5") { cfg->model.L5 = num(); return true; }
    if (key == "m5") { cfg->model.m5 = num(); return true; }
    if (key == "I5") { cfg->model.I5 = num(); return true; }
    if (key == "KP") { cfg->model.Kp = num(); return true; }
    if (key == "KD") { cfg->model.Kd = num(); return true; }
    if (key == "theta5d") { cfg->model.theta5_ref = num(); return true; }
    return false;
  }
  if (section == "sim") {
    if (key == "dt") { cfg->sim.dt = num(); return true; }
    if (key == "duration") { cfg->sim.duration = num(); return true; }
    if (key == "event_tol") { cfg->sim.event_tol = num(); return true; }
    if (key == "omega0") { cfg->sim.omega0 = num(); return true; }
    if (key == "record_stride") {
      cfg->sim.record_stride = parse_int(value, line);
      return true;
    }
    if (key == "projection_tol") { cfg->sim.projection_tol = num(); return true; }
    if (key == "theta_offset") { cfg->sim.theta_offset = num(); return true; }
    return false;
  }
  if (section == "sweep") {
    if (key == "phi_min") { cfg->sweep.phi_min = num(); return true; }
    if (key == "phi_max") { cfg->sweep.phi_max = num(); return true; }
    if (key == "phi_steps") {
      cfg->sweep.phi_steps = parse_int(value, line);
      return true;
    }
    if (key == "b_list") {
      cfg->sweep.b_list = parse_list(value, line);
      return true;
    }
    if (key == "settle_time") { cfg->sweep.settle_time = num(); return true; }
    if (key == "measure_steps") {
      cfg->sweep.measure_steps = parse_int(value, line);
      return true;
    }
    return false;
  }
  if (section == "output") {
    if (key == "dir") { cfg->output.dir = value; return true; }
    if (key == "prefix") { cfg->output.prefix = value; return true; }
    return false;
  }
  throw ConfigError(line, "unknown section [" + section + "]");
}

const char* kSections[] = {"model", "upper_body", "sim", "sweep", "output"};

}  // namespace

std::vector<double> SweepSpec::phi_grid() const {
  std::vector<double> grid;
  if (phi_steps <= 1) {
    grid.push_back(phi_min);
    return grid;
  }
  const double step = (phi_max - phi_min) / (phi_steps - 1);
  for (int i = 0; i < phi_steps; ++i) grid.push_back(phi_min + i * step);
  return grid;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(0, "cannot open config file '" + path + "'");

  RunConfig cfg;
  std::string section;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string text = raw;
    const size_t comment = text.find_first_of("#;");
    if (comment != std::string::npos) text = text.substr(0, comment);
    text = trim(text);
    if (text.empty()) continue;

    if (text.front() == '[') {
      if (text.back() != ']') {
        throw ConfigError(line, "unterminated section header");
      }
      section = trim(text.substr(1, text.size() - 2));
      bool known = false;
      for (const char* s : kSections) known = known || section == s;
      if (!known) throw ConfigError(line, "unknown section [" + section + "]");
      continue;
    }

    const size_t eq = text.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(line, "expected key = value");
    }
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    if (key.empty()) throw ConfigError(line, "empty key");
    if (section.empty()) {
      throw ConfigError(line, "key '" + key + "' outside any section");
    }
    if (!apply_key(&cfg, section, key, value, line)) {
      throw ConfigError(line,
                        "unknown key '" + key + "' in section [" + section + "]");
    }
  }
  return cfg;
}

void apply_override(RunConfig* cfg, const std::string& assignment) {
  const size_t eq = assignment.find('=');
  if (eq == std::string::npos) {
    throw ConfigError(0, "override must be key=value: '" + assignment + "'");
  }
  std::string key = trim(assignment.substr(0, eq));
  const std::string value = trim(assignment.substr(eq + 1));
  if (key.empty()) throw ConfigError(0, "override has an empty key");

  const size_t dot = key.find('.');
  if (dot != std::string::npos) {
    const std::string section = key.substr(0, dot);
    const std::string bare = key.substr(dot + 1);
    if (!apply_key(cfg, section, bare, value, 0)) {
      throw ConfigError(0, "unknown key '" + bare + "' in section [" +
                               section + "]");
    }
    return;
  }

  // Bare key: search all sections (names are globally unique).
  for (const char* section : kSections) {
    if (apply_key(cfg, section, key, value, 0)) return;
  }
  throw ConfigError(0, "unknown key '" + key + "'");
}

}  // namespace vcrw
