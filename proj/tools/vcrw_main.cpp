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

// Command-line front end:
//
//   vcrw simulate --config FILE [--set key=value ...] [--out DIR]
//   vcrw sweep    --config FILE [--set key=value ...] [--out DIR]
//   vcrw stick    --config FILE [--set key=value ...] [--out DIR]
//                 [--t0 T] [--t1 T] [--stride N]
//
// Exit codes: 0 success, 1 configuration/usage error, 2 simulation failure.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vcrw/analysis.hpp"
#include "vcrw/config.hpp"
#include "vcrw/csv.hpp"
#include "vcrw/sim.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kSimFailure = 2;

struct CommonArgs {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_dir;  // overrides [output] dir when non-empty
};

// Loads the config, applies overrides, validates.  Returns false (after
// printing to stderr) on any configuration problem.
bool prepare(const CommonArgs& args, vcrw::RunConfig* cfg) {
  try {
    *cfg = vcrw::load_config(args.config_path);
    for (const std::string& o : args.overrides) {
      vcrw::apply_override(cfg, o);
    }
    if (!args.out_dir.empty()) cfg->output.dir = args.out_dir;
    cfg->model.validate();
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return false;
  }
  return true;
}

bool write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream os(path, std::ios::binary);
  os << body;
  os.flush();
  if (!os) {
    std::cerr << "io error: cannot write " << path << "\n";
    return false;
  }
  return true;
}

std::filesystem::path output_path(const vcrw::RunConfig& cfg,
                                  const std::string& name) {
  std::filesystem::path dir(cfg.output.dir);
  if (!dir.empty()) std::filesystem::create_directories(dir);
  return dir / name;
}

int cmd_simulate(const vcrw::RunConfig& cfg) {
  vcrw::Trajectory traj;
  try {
    traj = vcrw::simulate(cfg.model, cfg.sim);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  }

  std::ostringstream ts;
  vcrw::write_timeseries_csv(ts, traj, cfg.model);
  std::ostringstream ev;
  vcrw::write_events_csv(ev, traj);
  if (!write_file(output_path(cfg, cfg.output.prefix + "_timeseries.csv"),
                  ts.str()) ||
      !write_file(output_path(cfg, cfg.output.prefix + "_events.csv"),
                  ev.str())) {
    return kConfigError;
  }

  if (traj.outcome != vcrw::Outcome::kCompleted) {
    std::cerr << "simulation failed at t=" << traj.end_time << ": "
              << traj.failure_reason << "\n";
    return kSimFailure;
  }
  return kOk;
}

int cmd_sweep(const vcrw::RunConfig& cfg) {
  const std::vector<double> phis = cfg.sweep.phi_grid();
  vcrw::SweepTable table;
  try {
    table = vcrw::slope_sweep(cfg.model, cfg.sim, phis, cfg.sweep.b_list,
                              cfg.sweep.settle_time, cfg.sweep.measure_steps);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  }

  std::ostringstream os;
  vcrw::write_sweep_csv(os, table);
  if (!write_file(output_path(cfg, "sweep.csv"), os.str())) {
    return kConfigError;
  }
  return kOk;
}

int cmd_stick(const vcrw::RunConfig& cfg, double t0, double t1, int stride) {
  vcrw::Trajectory traj;
  try {
    traj = vcrw::simulate(cfg.model, cfg.sim);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  }

  if (t1 < 0.0) t1 = traj.end_time;
  std::vector<vcrw::StickSegment> segs;
  try {
    segs = vcrw::stick_diagram(traj, cfg.model, t0, t1, stride);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  }

  std::ostringstream os;
  vcrw::write_stick_csv(os, segs);
  if (!write_file(output_path(cfg, "stick.csv"), os.str())) {
    return kConfigError;
  }

  if (traj.outcome != vcrw::Outcome::kCompleted) {
    std::cerr << "simulation failed at t=" << traj.end_time << ": "
              << traj.failure_reason << "\n";
    return kSimFailure;
  }
  return kOk;
}

void add_common(CLI::App* sub, CommonArgs* args) {
  sub->add_option("--config", args->config_path, "configuration file")
      ->required();
  sub->add_option("--set", args->overrides,
                  "override a config key (key=value or section.key=value)");
  sub->add_option("--out", args->out_dir, "output directory");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"viscoelastically combined rimless-wheel walker simulator"};
  app.require_subcommand(1);

  CommonArgs sim_args;
  CLI::App* sim_cmd =
      app.add_subcommand("simulate", "run one walk and dump time series");
  add_common(sim_cmd, &sim_args);

  CommonArgs sweep_args;
  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "grid sweep over slope and anchor offset");
  add_common(sweep_cmd, &sweep_args);

  CommonArgs stick_args;
  double t0 = 0.0;
  double t1 = -1.0;
  int stride = 10;
  CLI::App* stick_cmd =
      app.add_subcommand("stick", "dump stick-figure frames of one walk");
  add_common(stick_cmd, &stick_args);
  stick_cmd->add_option("--t0", t0, "window start [s]");
  stick_cmd->add_option("--t1", t1, "window end [s] (default: run end)");
  stick_cmd->add_option("--stride", stride, "keep every Nth sample");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  vcrw::RunConfig cfg;
  if (sim_cmd->parsed()) {
    if (!prepare(sim_args, &cfg)) return kConfigError;
    return cmd_simulate(cfg);
  }
  if (sweep_cmd->parsed()) {
    if (!prepare(sweep_args, &cfg)) return kConfigError;
    return cmd_sweep(cfg);
  }
  if (stick_cmd->parsed()) {
    if (!prepare(stick_args, &cfg)) return kConfigError;
    return cmd_stick(cfg, t0, t1, stride);
  }
  return kConfigError;
}
