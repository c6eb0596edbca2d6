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

#ifndef VCRW_HYBRID_H_
#define VCRW_HYBRID_H_

#include <string>

#include "vcrw/dynamics.hpp"
#include "vcrw/model.hpp"

// Hybrid structure of the gait: single support -> (touchdown, impact) ->
// double support -> (liftoff) -> single support, cycling through the feet
// F1A, F2A, F3A, F4A, F1B, F2B, F3B, F4B.

namespace vcrw {

// Successor in touchdown order (F4B wraps to F1A).
Foot next_foot(Foot f);

// Single support: height of the next foot's tip above the floor.  A
// touchdown fires when this crosses zero from above with the tip moving
// downward.
double touchdown_guard(const GeneralizedState& s, const ContactMode& mode,
                       const ModelParams& p);

// Double support: vertical GRF on the rear foot.  A liftoff fires when it
// crosses zero from above.
double liftoff_guard(const VecX& lambda, const ContactMode& mode);

// Constraint rows active at the instant of impact: both contacts plus the
// welds (and the variant's lock/pin rows).  Identical to the double-support
// constraint Jacobian at the same state; assembled directly here so the two
// constructions can be checked against each other.
MatX impact_jacobian(const GeneralizedState& s, Foot rear, Foot fore,
                     const ModelParams& p);

struct ImpactResult {
  VecX qd_post;   // velocities after the completely inelastic impact
  VecX impulse;   // constraint-space impulse
};

// Completely inelastic impact: positions are untouched and
//   qd_post = (I - M^-1 Ji^T (Ji M^-1 Ji^T)^-1 Ji) qd_pre.
// Kinetic energy change is -1/2 * impulse^T (Ji M^-1 Ji^T) impulse <= 0.
ImpactResult impact_map(const GeneralizedState& s, const VecX& qd_pre,
                        Foot rear, Foot fore, const ModelParams& p);

// One hybrid transition, with the state just before and just after.
struct TransitionEvent {
  enum class Kind { kTouchdown, kLiftoff, kFailure };

  Kind kind = Kind::kTouchdown;
  double t = 0.0;
  ContactMode mode_pre;
  ContactMode mode_post;
  VecX q;
  VecX qd_pre;
  VecX qd_post;
  VecX impulse;        // touchdown only (empty otherwise)
  double work = 0.0;   // cumulative positive actuator work up to t
  std::string reason;  // failure only
};

const char* to_string(TransitionEvent::Kind k);

}  // namespace vcrw

#endif  // VCRW_HYBRID_H_
