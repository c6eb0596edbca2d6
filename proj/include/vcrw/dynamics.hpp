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

#ifndef VCRW_DYNAMICS_H_
#define VCRW_DYNAMICS_H_

#include <vector>

#include "vcrw/model.hpp"

// Constrained equations of motion
//
//   M qdd + h = Jc^T lambda + S u,      Jc qd = 0,
//
// with h = dPg/dq + dPe/dq + dR/dqd (gravity, elastic, Rayleigh damping).
// M is constant block-diagonal; all coupling between bodies enters through
// the constraint rows and the spring forces.

namespace vcrw {

enum class RowKind {
  kContactX,  // tip x-velocity of a stance foot
  kContactZ,  // tip z-velocity of a stance foot (multiplier = vertical GRF)
  kWeldX,     // center x-velocities of a welded limb pair
  kWeldZ,     // center z-velocities of a welded limb pair
  kRotLock,   // relative angular velocity of a welded pair (vcrw1)
  kPinX,      // upper-body COM x relative to its pin (vcrw3)
  kPinZ,      // upper-body COM z relative to its pin (vcrw3)
};

struct ConstraintRow {
  RowKind kind;
  Foot foot;  // contact rows only
  int pair;   // weld / rot-lock rows: 0 for limbs (1,3), 1 for limbs (2,4)
};

// Velocity-level constraint set: J qd = 0 with time derivative Jdot.
// Row order is fixed: rear contact (x, z), fore contact (x, z; double
// support only), welds (1-3 x, 1-3 z, 2-4 x, 2-4 z), rotation locks
// (vcrw1: 1-3, 2-4), upper-body pin (vcrw3: x, z).
struct ConstraintSet {
  MatX J;
  MatX Jdot;
  std::vector<ConstraintRow> rows;

  int count() const { return static_cast<int>(J.rows()); }
  // Indices of the contact-normal rows.  fore_normal_row() is -1 in single
  // support.
  int rear_normal_row() const { return 1; }
  int fore_normal_row() const;
};

ConstraintSet constraint_set(const GeneralizedState& s, const ContactMode& mode,
                             const ModelParams& p);

// Constant diagonal mass matrix diag(m_i, m_i, m_i a_i^2) per limb, plus
// diag(m5, m5, I5) for the vcrw3 upper body.
MatX mass_matrix(const ModelParams& p);

VecX gravity_gradient(const GeneralizedState& s, const ModelParams& p);
VecX elastic_gradient(const GeneralizedState& s, const ModelParams& p);
VecX damping_gradient(const GeneralizedState& s, const ModelParams& p);

// h = gravity + elastic + damping gradients.
VecX bias_vector(const GeneralizedState& s, const ModelParams& p);

// Generalized direction of the assist torque: +u on theta_1 and +u on
// theta_5 (the reaction; the two angles have opposite senses), zero for the
// passive variants.
VecX actuation_map(const ModelParams& p);

double gravitational_potential(const GeneralizedState& s, const ModelParams& p);
double elastic_potential(const GeneralizedState& s, const ModelParams& p);
double kinetic_energy(const GeneralizedState& s, const ModelParams& p);
// Rayleigh dissipation function R = sum c/2 * rate^2 (power loss = 2R).
double rayleigh_dissipation(const GeneralizedState& s, const ModelParams& p);

// Constraint multipliers from the dense normal-equation solve
//   lambda = (J M^-1 J^T)^-1 (J M^-1 (h - S u) - Jdot qd).
// Contact-z components are the vertical ground reaction forces.  Throws
// SolverError when J M^-1 J^T is numerically singular.
VecX contact_forces(const GeneralizedState& s, const ContactMode& mode,
                    const ModelParams& p, double u = 0.0);

// qdd = M^-1 (Jc^T lambda - h + S u).
VecX forward_dynamics(const GeneralizedState& s, const ContactMode& mode,
                      const ModelParams& p, double u = 0.0);

// Input-affine form of the posture acceleration: thdd_5 = A u - B.
struct Linearization {
  double A;
  double B;
};

Linearization linearization_coefficients(const GeneralizedState& s,
                                         const ContactMode& mode,
                                         const ModelParams& p);

// Posture-servo torque u = A^-1 (v + B) with v = -Kd*thd_5 -
// Kp*(th_5 - th_5ref), so the closed loop obeys thdd_5 = v.  Throws
// UncontrollableError when |A| < 1e-9.
double control_torque(const GeneralizedState& s, const ContactMode& mode,
                      const ModelParams& p);

}  // namespace vcrw

#endif  // VCRW_DYNAMICS_H_
