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

#include "vcrw/hybrid.hpp"

#include <cmath>

namespace vcrw {

Foot next_foot(Foot f) {
  return static_cast<Foot>((static_cast<int>(f) + 1) % kNumFeet);
}

double touchdown_guard(const GeneralizedState& s, const ContactMode& mode,
                       const ModelParams& p) {
  if (mode.is_double()) {
    throw std::invalid_argument("touchdown guard applies to single support");
  }
  return tip_position(s, p, next_foot(mode.rear)).y();
}

double liftoff_guard(const VecX& lambda, const ContactMode& mode) {
  if (!mode.is_double()) {
    throw std::invalid_argument("liftoff guard applies to double support");
  }
  // Rear contact rows lead the fixed row order; index 1 is the rear normal.
  return lambda[1];
}

MatX impact_jacobian(const GeneralizedState& s, Foot rear, Foot fore,
                     const ModelParams& p) {
  check_state(s, p);
  const int dim = p.dim();
  int n = 8;
  if (p.variant == Variant::kVcrw1) n += 2;
  if (p.variant == Variant::kVcrw3) n += 2;
  MatX J = MatX::Zero(n, dim);

  int r = 0;
  for (Foot f : {rear, fore}) {
    const int i = limb_of(f);
    const double sg = side_of(f);
    const double th = s.q[qth(i)];
    J(r, qx(i)) = 1.0;
    J(r, qth(i)) = -sg * p.L[i] * std::cos(th);
    J(r + 1, qz(i)) = 1.0;
    J(r + 1, qth(i)) = sg * p.L[i] * std::sin(th);
    r += 2;
  }
  for (int pair = 0; pair < 2; ++pair) {
    J(r, qx(pair)) = 1.0;
    J(r, qx(pair + 2)) = -1.0;
    J(r + 1, qz(pair)) = 1.0;
    J(r + 1, qz(pair + 2)) = -1.0;
    r += 2;
  }
  if (p.variant == Variant::kVcrw1) {
    for (int pair = 0; pair < 2; ++pair) {
      J(r, qth(pair)) = 1.0;
      J(r, qth(pair + 2)) = -1.0;
      ++r;
    }
  }
  if (p.variant == Variant::kVcrw3) {
    const double half = 0.5 * p.L5;
    const double th5 = s.q[kQth5];
    J(r, qx(0)) = 1.0;
    J(r, kQth5) = -half * std::sin(th5);
    J(r, kQx5) = -1.0;
    J(r + 1, qz(0)) = 1.0;
    J(r + 1, kQth5) = half * std::cos(th5);
    J(r + 1, kQz5) = -1.0;
  }
  return J;
}

ImpactResult impact_map(const GeneralizedState& s, const VecX& qd_pre,
                        Foot rear, Foot fore, const ModelParams& p) {
  const MatX Ji = impact_jacobian(s, rear, fore, p);
  const int dim = p.dim();

  VecX Minv_diag(dim);
  {
    const MatX M = mass_matrix(p);
    for (int i = 0; i < dim; ++i) Minv_diag[i] = 1.0 / M(i, i);
  }

  const MatX JMinv = Ji * Minv_diag.asDiagonal();
  const MatX W = JMinv * Ji.transpose();
  Eigen::LLT<MatX> llt(W);
  if (llt.info() != Eigen::Success || llt.rcond() < 1e-14) {
    throw SolverError("impact normal matrix is numerically singular");
  }

  ImpactResult out;
  out.impulse = -llt.solve(Ji * qd_pre);
  out.qd_post = qd_pre + Minv_diag.asDiagonal() * (Ji.transpose() * out.impulse);
  return out;
}

const char* to_string(TransitionEvent::Kind k) {
  switch (k) {
    case TransitionEvent::Kind::kTouchdown:
      return "touchdown";
    case TransitionEvent::Kind::kLiftoff:
      return "liftoff";
    case TransitionEvent::Kind::kFailure:
      return "failure";
  }
  return "?";
}

}  // namespace vcrw
