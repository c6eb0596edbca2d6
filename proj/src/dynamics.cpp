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

#include "vcrw/dynamics.hpp"

#include <cmath>
#include <string>

namespace vcrw {

namespace {

// Writes the two velocity-level contact rows of foot f at row r:
//   xd_i + sg*L*thd_i*(-cos th) = 0,   zd_i + sg*L*thd_i*(sin th) = 0.
void emit_contact_rows(const GeneralizedState& s, const ModelParams& p, Foot f,
                       int r, MatX* J, MatX* Jdot,
                       std::vector<ConstraintRow>* rows) {
  const int i = limb_of(f);
  const double sg = side_of(f);
  const double th = s.q[qth(i)];
  const double thd = s.qd[qth(i)];
  const double L = p.L[i];

  (*J)(r, qx(i)) = 1.0;
  (*J)(r, qth(i)) = -sg * L * std::cos(th);
  (*Jdot)(r, qth(i)) = sg * L * thd * std::sin(th);
  rows->push_back({RowKind::kContactX, f, -1});

  (*J)(r + 1, qz(i)) = 1.0;
  (*J)(r + 1, qth(i)) = sg * L * std::sin(th);
  (*Jdot)(r + 1, qth(i)) = sg * L * thd * std::cos(th);
  rows->push_back({RowKind::kContactZ, f, -1});
}

}  // namespace

int ConstraintSet::fore_normal_row() const {
  return (count() >= 4 && rows[3].kind == RowKind::kContactZ) ? 3 : -1;
}

ConstraintSet constraint_set(const GeneralizedState& s, const ContactMode& mode,
                             const ModelParams& p) {
  check_state(s, p);
  const int dim = p.dim();

  int n = mode.is_double() ? 8 : 6;
  if (p.variant == Variant::kVcrw1) n += 2;  // rotation locks
  if (p.variant == Variant::kVcrw3) n += 2;  // upper-body pin

  ConstraintSet cs;
  cs.J = MatX::Zero(n, dim);
  cs.Jdot = MatX::Zero(n, dim);
  cs.rows.reserve(n);

  int r = 0;
  emit_contact_rows(s, p, mode.rear, r, &cs.J, &cs.Jdot, &cs.rows);
  r += 2;
  if (mode.is_double()) {
    emit_contact_rows(s, p, mode.fore, r, &cs.J, &cs.Jdot, &cs.rows);
    r += 2;
  }

  // Welds: centers of limbs (1,3) coincide, likewise (2,4).
  for (int pair = 0; pair < 2; ++pair) {
    const int i = pair;      // limbs 1 and 2 (0-based 0 and 1)
    const int j = pair + 2;  // limbs 3 and 4
    cs.J(r, qx(i)) = 1.0;
    cs.J(r, qx(j)) = -1.0;
    cs.rows.push_back({RowKind::kWeldX, mode.rear, pair});
    ++r;
    cs.J(r, qz(i)) = 1.0;
    cs.J(r, qz(j)) = -1.0;
    cs.rows.push_back({RowKind::kWeldZ, mode.rear, pair});
    ++r;
  }

  if (p.variant == Variant::kVcrw1) {
    for (int pair = 0; pair < 2; ++pair) {
      cs.J(r, qth(pair)) = 1.0;
      cs.J(r, qth(pair + 2)) = -1.0;
      cs.rows.push_back({RowKind::kRotLock, mode.rear, pair});
      ++r;
    }
  }

  if (p.variant == Variant::kVcrw3) {
    // Upper-body COM rides at L5/2 along upper_body_axis(th5) from the pin
    // at the cross-A center:  xd_1 - (L5/2) sin(th5) thd_5 - xd_5 = 0 and
    // zd_1 + (L5/2) cos(th5) thd_5 - zd_5 = 0.
    const double half = 0.5 * p.L5;
    const double th5 = s.q[kQth5];
    const double thd5 = s.qd[kQth5];
    cs.J(r, qx(0)) = 1.0;
    cs.J(r, kQth5) = -half * std::sin(th5);
    cs.J(r, kQx5) = -1.0;
    cs.Jdot(r, kQth5) = -half * thd5 * std::cos(th5);
    cs.rows.push_back({RowKind::kPinX, mode.rear, -1});
    ++r;
    cs.J(r, qz(0)) = 1.0;
    cs.J(r, kQth5) = half * std::cos(th5);
    cs.J(r, kQz5) = -1.0;
    cs.Jdot(r, kQth5) = -half * thd5 * std::sin(th5);
    cs.rows.push_back({RowKind::kPinZ, mode.rear, -1});
    ++r;
  }

  return cs;
}

MatX mass_matrix(const ModelParams& p) {
  const int dim = p.dim();
  MatX M = MatX::Zero(dim, dim);
  for (int i = 0; i < 4; ++i) {
    M(qx(i), qx(i)) = p.m[i];
    M(qz(i), qz(i)) = p.m[i];
    M(qth(i), qth(i)) = p.m[i] * p.a[i] * p.a[i];
  }
  if (p.variant == Variant::kVcrw3) {
    M(kQx5, kQx5) = p.m5;
    M(kQz5, kQz5) = p.m5;
    M(kQth5, kQth5) = p.I5;
  }
  return M;
}

double gravitational_potential(const GeneralizedState& s, const ModelParams& p) {
  check_state(s, p);
  const double cphi = std::cos(p.phi);
  const double sphi = std::sin(p.phi);
  double P = 0.0;
  for (int i = 0; i < 4; ++i) {
    P += p.m[i] * p.g * (s.q[qz(i)] * cphi - s.q[qx(i)] * sphi);
  }
  if (p.variant == Variant::kVcrw3) {
    P += p.m5 * p.g * (s.q[kQz5] * cphi - s.q[kQx5] * sphi);
  }
  return P;
}

VecX gravity_gradient(const GeneralizedState& s, const ModelParams& p) {
  check_state(s, p);
  const double cphi = std::cos(p.phi);
  const double sphi = std::sin(p.phi);
  VecX grad = VecX::Zero(p.dim());
  for (int i = 0; i < 4; ++i) {
    grad[qx(i)] = -p.m[i] * p.g * sphi;
    grad[qz(i)] = p.m[i] * p.g * cphi;
  }
  if (p.variant == Variant::kVcrw3) {
    grad[kQx5] = -p.m5 * p.g * sphi;
    grad[kQz5] = p.m5 * p.g * cphi;
  }
  return grad;
}

namespace {

// d length / dq of one element endpoint on limb `limb`; sign -1 for the
// trailing endpoint.  unit must point from end_a to end_b.
void add_length_jacobian(const GeneralizedState& s, const ModelParams& p,
                         const SpringAnchor& anchor, const Vec2& unit,
                         double endpoint_sign, double scale, VecX* out) {
  const int i = anchor.limb;
  const double th = s.q[qth(i)];
  // d p / d theta_i = sign*b*(-cos th, sin th)
  const Vec2 dpdth = anchor.sign * p.b[i] * Vec2(-std::cos(th), std::sin(th));
  (*out)[qx(i)] += scale * endpoint_sign * unit.x();
  (*out)[qz(i)] += scale * endpoint_sign * unit.y();
  (*out)[qth(i)] += scale * endpoint_sign * unit.dot(dpdth);
}

}  // namespace

double elastic_potential(const GeneralizedState& s, const ModelParams& p) {
  const auto elements = spring_elements(p);
  const auto geom = spring_geometry(s, p);
  double P = 0.0;
  for (int j = 0; j < kNumSprings; ++j) {
    const double e = geom[j].length - elements[j].rest_length;
    P += 0.5 * elements[j].stiffness * e * e;
  }
  return P;
}

VecX elastic_gradient(const GeneralizedState& s, const ModelParams& p) {
  const auto elements = spring_elements(p);
  const auto geom = spring_geometry(s, p);
  VecX grad = VecX::Zero(p.dim());
  for (int j = 0; j < kNumSprings; ++j) {
    const double force = elements[j].stiffness *
                         (geom[j].length - elements[j].rest_length);
    add_length_jacobian(s, p, elements[j].end_a, geom[j].unit, -1.0, force,
                        &grad);
    add_length_jacobian(s, p, elements[j].end_b, geom[j].unit, +1.0, force,
                        &grad);
  }
  return grad;
}

VecX damping_gradient(const GeneralizedState& s, const ModelParams& p) {
  const auto elements = spring_elements(p);
  const auto geom = spring_geometry(s, p);
  VecX grad = VecX::Zero(p.dim());
  for (int j = 0; j < kNumSprings; ++j) {
    // dR/dqd = c * rate * d(rate)/dqd, and d(rate)/dqd = d(length)/dq.
    const double force = elements[j].damping * geom[j].rate;
    add_length_jacobian(s, p, elements[j].end_a, geom[j].unit, -1.0, force,
                        &grad);
    add_length_jacobian(s, p, elements[j].end_b, geom[j].unit, +1.0, force,
                        &grad);
  }
  return grad;
}

double rayleigh_dissipation(const GeneralizedState& s, const ModelParams& p) {
  const auto elements = spring_elements(p);
  const auto geom = spring_geometry(s, p);
  double R = 0.0;
  for (int j = 0; j < kNumSprings; ++j) {
    R += 0.5 * elements[j].damping * geom[j].rate * geom[j].rate;
  }
  return R;
}

VecX bias_vector(const GeneralizedState& s, const ModelParams& p) {
  return gravity_gradient(s, p) + elastic_gradient(s, p) +
         damping_gradient(s, p);
}

VecX actuation_map(const ModelParams& p) {
  VecX S = VecX::Zero(p.dim());
  if (p.variant == Variant::kVcrw3) {
    // The motor acts across the pin joint: +u on the cross-A limb angle and
    // the equal-and-opposite reaction on the upper body.  Limb angles count
    // clockwise rolls as positive while theta_5 counts counterclockwise
    // raises as positive, so the reaction enters with the same sign.
    S[qth(0)] = 1.0;
    S[kQth5] = 1.0;
  }
  return S;
}

double kinetic_energy(const GeneralizedState& s, const ModelParams& p) {
  check_state(s, p);
  double T = 0.0;
  for (int i = 0; i < 4; ++i) {
    T += 0.5 * p.m[i] *
         (s.qd[qx(i)] * s.qd[qx(i)] + s.qd[qz(i)] * s.qd[qz(i)]);
    T += 0.5 * p.m[i] * p.a[i] * p.a[i] * s.qd[qth(i)] * s.qd[qth(i)];
  }
  if (p.variant == Variant::kVcrw3) {
    T += 0.5 * p.m5 * (s.qd[kQx5] * s.qd[kQx5] + s.qd[kQz5] * s.qd[kQz5]);
    T += 0.5 * p.I5 * s.qd[kQth5] * s.qd[kQth5];
  }
  return T;
}

namespace {

// Shared core: lambda and optionally qdd for given inputs.
struct SolveResult {
  VecX lambda;
  VecX qdd;
};

SolveResult solve_constrained(const GeneralizedState& s,
                              const ContactMode& mode, const ModelParams& p,
                              double u, bool want_qdd) {
  const ConstraintSet cs = constraint_set(s, mode, p);
  const int dim = p.dim();

  VecX Minv_diag(dim);
  {
    const MatX M = mass_matrix(p);
    for (int i = 0; i < dim; ++i) Minv_diag[i] = 1.0 / M(i, i);
  }

  VecX rhs_force = bias_vector(s, p);  // h
  if (u != 0.0) rhs_force -= u * actuation_map(p);

  const MatX JMinv = cs.J * Minv_diag.asDiagonal();
  const MatX W = JMinv * cs.J.transpose();

  Eigen::LLT<MatX> llt(W);
  if (llt.info() != Eigen::Success || llt.rcond() < 1e-14) {
    throw SolverError(
        "constraint normal matrix is numerically singular (rcond ~ " +
        std::to_string(llt.info() == Eigen::Success ? llt.rcond() : 0.0) +
        ")");
  }

  SolveResult out;
  out.lambda = llt.solve(JMinv * rhs_force - cs.Jdot * s.qd);
  if (want_qdd) {
    out.qdd = Minv_diag.asDiagonal() *
              (cs.J.transpose() * out.lambda - rhs_force);
  }
  return out;
}

}  // namespace

VecX contact_forces(const GeneralizedState& s, const ContactMode& mode,
                    const ModelParams& p, double u) {
  return solve_constrained(s, mode, p, u, false).lambda;
}

VecX forward_dynamics(const GeneralizedState& s, const ContactMode& mode,
                      const ModelParams& p, double u) {
  return solve_constrained(s, mode, p, u, true).qdd;
}

Linearization linearization_coefficients(const GeneralizedState& s,
                                         const ContactMode& mode,
                                         const ModelParams& p) {
  if (p.variant != Variant::kVcrw3) {
    throw std::invalid_argument("linearization requires the assisted variant");
  }
  // thdd_5 is affine in u: evaluate at u = 0 and u = 1.
  const double at0 = forward_dynamics(s, mode, p, 0.0)[kQth5];
  const double at1 = forward_dynamics(s, mode, p, 1.0)[kQth5];
  Linearization lin;
  lin.B = -at0;
  lin.A = at1 - at0;
  return lin;
}

double control_torque(const GeneralizedState& s, const ContactMode& mode,
                      const ModelParams& p) {
  const Linearization lin = linearization_coefficients(s, mode, p);
  if (std::abs(lin.A) < 1e-9) {
    throw UncontrollableError("posture angle is uncontrollable at this pose");
  }
  const double th5 = s.q[kQth5];
  const double thd5 = s.qd[kQth5];
  const double v = -p.Kd * thd5 - p.Kp * (th5 - p.theta5_ref);
  return (v + lin.B) / lin.A;
}

}  // namespace vcrw
