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

#ifndef VCRW_ANALYSIS_H_
#define VCRW_ANALYSIS_H_

#include <span>
#include <vector>

#include "vcrw/sim.hpp"

// Gait descriptors extracted from completed trajectories.

namespace vcrw {

// One step = the interval between consecutive touchdowns.
struct StepRecord {
  int index = 0;
  double t_start = 0.0;         // touchdown opening the step
  double t_end = 0.0;           // touchdown closing the step
  double period = 0.0;          // t_end - t_start
  double length = 0.0;          // floor distance between the two contact points
  double speed = 0.0;           // length / period
  double work = 0.0;            // positive actuator work over the step
  double specific_resistance = 0.0;  // work / (total weight * length)
  Vec2 contact_start;
  Vec2 contact_end;
};

// Steps from the touchdown events of a trajectory.  The contact point of a
// touchdown is the landing tip position at the event.
std::vector<StepRecord> step_descriptors(const Trajectory& traj,
                                         const ModelParams& p);

// Smallest k <= 4 such that both the period and the length sequences are
// k-periodic within the relative tolerance; 0 when no such k exists
// (aperiodic) or fewer than 2k steps are available.
int detect_periodicity(std::span<const StepRecord> steps,
                       double rel_tol = 1e-3);

// One sweep cell: gait descriptors at a (slope, anchor offset) pair,
// averaged over `measure_steps` steps taken after `settle_time` seconds.
struct SweepCell {
  double phi = 0.0;
  double b = 0.0;
  bool completed = false;
  int periodicity = 0;
  double period_mean = 0.0;
  double length_mean = 0.0;
  double speed_mean = 0.0;
};

struct SweepTable {
  std::vector<double> phi_values;
  std::vector<double> b_values;
  std::vector<SweepCell> cells;  // row-major: phi outer, b inner
};

// Grid sweep over slope angle and anchor offset.  Each cell simulates from
// the default initial state for settle_time + measure_steps * 2 seconds and
// averages the steps that start after settle_time.  Cells run independently
// (and in parallel when hardware allows); the table order is deterministic.
SweepTable slope_sweep(const ModelParams& base, const SimConfig& cfg,
                       std::span<const double> phi_values,
                       std::span<const double> b_values,
                       double settle_time = 100.0, int measure_steps = 20);

// One drawable segment of a stance snapshot.
struct StickSegment {
  int frame = 0;
  std::string id;  // "limb1".."limb4", "body", markers "G13"/"G24"
  Vec2 p0;
  Vec2 p1;  // equals p0 for marker rows
};

// Tip-to-tip limb segments plus center markers (and the upper-body link for
// vcrw3) at every stride-th sample with t in [t0, t1].
std::vector<StickSegment> stick_diagram(const Trajectory& traj,
                                        const ModelParams& p, double t0,
                                        double t1, int stride);

}  // namespace vcrw

#endif  // VCRW_ANALYSIS_H_
