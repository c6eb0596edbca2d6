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

#ifndef VCRW_SIM_H_
#define VCRW_SIM_H_

#include <functional>
#include <utility>
#include <vector>

#include "vcrw/hybrid.hpp"

// Fixed-step RK4 integration of the constrained dynamics with bisection
// event localization.  Runs are deterministic: identical inputs produce
// bit-identical trajectories.

namespace vcrw {

struct SimConfig {
  double dt = 1e-4;             // RK4 step [s]
  double duration = 3.0;        // simulated time [s]
  double event_tol = 1e-10;     // event localization tolerance [s]
  double projection_tol = 1e-9;  // velocity residual that triggers projection
  double omega0 = 1.5;          // initial forward angular rate [rad/s]
  double theta_offset = 0.39269908169872414;  // pi/8; stance tilt = pi/8 - offset
  int record_stride = 10;       // sample every N steps (0 = events only)
};

// One recorded instant.
struct Sample {
  double t;
  VecX q;
  VecX qd;
  ContactMode mode;
  VecX lambda;   // constraint forces at this state
  double u;      // assist torque (0 for passive variants)
  double work;   // cumulative positive actuator work
};

enum class Outcome { kCompleted, kFailed };

struct Trajectory {
  std::vector<Sample> samples;
  std::vector<TransitionEvent> events;
  Outcome outcome = Outcome::kCompleted;
  std::string failure_reason;
  double end_time = 0.0;
  // Largest position-level constraint violation observed at any event
  // (weld center mismatch and stance-tip height drift).
  double max_position_drift = 0.0;
};

// One RK4 step of size dt.  For vcrw3 the assist torque is re-evaluated at
// every stage.  If work_increment is non-null it accumulates the positive
// actuator work of the step using the RK4 quadrature weights.  The returned
// state is velocity-projected when its constraint residual exceeds
// projection_tol.
GeneralizedState integrate_step(const GeneralizedState& s,
                                const ContactMode& mode, const ModelParams& p,
                                double dt, double projection_tol = 1e-9,
                                double* work_increment = nullptr);

// Removes the constraint-violating velocity component:
//   qd <- qd - M^-1 J^T (J M^-1 J^T)^-1 J qd
// (the same projector the impact map applies with the impact Jacobian).
GeneralizedState project_velocities(const GeneralizedState& s,
                                    const ContactMode& mode,
                                    const ModelParams& p);

// Locates a zero crossing of `guard` inside (0, dt_max] by bisection on the
// step size, to within event_tol seconds.  Preconditions: guard > 0 at s and
// <= 0 after a step of dt_max (throws std::invalid_argument otherwise).
// Returns the step size to the event and fills at_event; work_increment (if
// non-null) accumulates actuator work up to the event.
double locate_event(const GeneralizedState& s, const ContactMode& mode,
                    const ModelParams& p,
                    const std::function<double(const GeneralizedState&)>& guard,
                    double dt_max, double event_tol,
                    double projection_tol, GeneralizedState* at_event,
                    double* work_increment = nullptr);

// Nominal start: all centers stacked above the F1A stance tip at the origin,
// limbs at their nominal quarter-turn offsets, stance angle pi/8 -
// theta_offset, and a rigid forward rotation omega0 about the stance tip
// (projected onto the constraint manifold).  The upper body starts at the
// commanded posture angle with zero rate.
std::pair<GeneralizedState, ContactMode> default_initial_state(
    const ModelParams& p, const SimConfig& cfg);

// Runs the hybrid automaton for cfg.duration (or until failure).  Failures
// (stance force reversal, foot scuffing, velocity blow-up, solver trouble)
// are recorded in the outcome, never thrown.
Trajectory simulate(const ModelParams& p, const SimConfig& cfg,
                    const GeneralizedState& initial, const ContactMode& mode0);

// Same, starting from default_initial_state.
Trajectory simulate(const ModelParams& p, const SimConfig& cfg);

}  // namespace vcrw

#endif  // VCRW_SIM_H_
