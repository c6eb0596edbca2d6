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

#include "vcrw/sim.hpp"

#include <algorithm>
#include <cmath>

namespace vcrw {

namespace {

struct StageEval {
  VecX qd;
  VecX qdd;
  double power;  // positive actuator power, for the work quadrature
};

StageEval eval_stage(const GeneralizedState& s, const ContactMode& mode,
                     const ModelParams& p) {
  StageEval e;
  double u = 0.0;
  e.power = 0.0;
  if (p.variant == Variant::kVcrw3) {
    u = control_torque(s, mode, p);
    const double rel = s.qd[qth(0)] + s.qd[kQth5];
    e.power = std::max(u * rel, 0.0);
  }
  e.qd = s.qd;
  e.qdd = forward_dynamics(s, mode, p, u);
  return e;
}

double constraint_residual(const GeneralizedState& s, const ContactMode& mode,
                           const ModelParams& p) {
  const ConstraintSet cs = constraint_set(s, mode, p);
  return (cs.J * s.qd).lpNorm<Eigen::Infinity>();
}

}  // namespace

GeneralizedState project_velocities(const GeneralizedState& s,
                                    const ContactMode& mode,
                                    const ModelParams& p) {
  const ConstraintSet cs = constraint_set(s, mode, p);
  const int dim = p.dim();
  VecX Minv_diag(dim);
  {
    const MatX M = mass_matrix(p);
    for (int i = 0; i < dim; ++i) Minv_diag[i] = 1.0 / M(i, i);
  }
  const MatX JMinv = cs.J * Minv_diag.asDiagonal();
  const MatX W = JMinv * cs.J.transpose();
  Eigen::LLT<MatX> llt(W);
  if (llt.info() != Eigen::Success || llt.rcond() < 1e-14) {
    throw SolverError("projection normal matrix is numerically singular");
  }
  GeneralizedState out = s;
  out.qd = s.qd - Minv_diag.asDiagonal() *
                      (cs.J.transpose() * llt.solve(cs.J * s.qd));
  return out;
}

GeneralizedState integrate_step(const GeneralizedState& s,
                                const ContactMode& mode, const ModelParams& p,
                                double dt, double projection_tol,
                                double* work_increment) {
  const StageEval k1 = eval_stage(s, mode, p);

  GeneralizedState s2{s.t + 0.5 * dt, s.q + 0.5 * dt * k1.qd,
                      s.qd + 0.5 * dt * k1.qdd};
  const StageEval k2 = eval_stage(s2, mode, p);

  GeneralizedState s3{s.t + 0.5 * dt, s.q + 0.5 * dt * k2.qd,
                      s.qd + 0.5 * dt * k2.qdd};
  const StageEval k3 = eval_stage(s3, mode, p);

  GeneralizedState s4{s.t + dt, s.q + dt * k3.qd, s.qd + dt * k3.qdd};
  const StageEval k4 = eval_stage(s4, mode, p);

  GeneralizedState out;
  out.t = s.t + dt;
  out.q = s.q + (dt / 6.0) * (k1.qd + 2.0 * k2.qd + 2.0 * k3.qd + k4.qd);
  out.qd = s.qd + (dt / 6.0) * (k1.qdd + 2.0 * k2.qdd + 2.0 * k3.qdd + k4.qdd);

  if (work_increment) {
    *work_increment +=
        (dt / 6.0) * (k1.power + 2.0 * k2.power + 2.0 * k3.power + k4.power);
  }

  if (constraint_residual(out, mode, p) > projection_tol) {
    out = project_velocities(out, mode, p);
  }
  return out;
}

double locate_event(const GeneralizedState& s, const ContactMode& mode,
                    const ModelParams& p,
                    const std::function<double(const GeneralizedState&)>& guard,
                    double dt_max, double event_tol, double projection_tol,
                    GeneralizedState* at_event, double* work_increment) {
  if (!(guard(s) > 0.0)) {
    throw std::invalid_argument("locate_event: guard not positive at start");
  }
  GeneralizedState s_hi = integrate_step(s, mode, p, dt_max, projection_tol);
  if (guard(s_hi) > 0.0) {
    throw std::invalid_argument("locate_event: no sign change over the step");
  }

  // Bisect on the step size; every probe is a single RK4 step from s.
  double lo = 0.0;
  double hi = dt_max;
  while (hi - lo > event_tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // step size below representable
    GeneralizedState s_mid = integrate_step(s, mode, p, mid, projection_tol);
    if (guard(s_mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
      s_hi = std::move(s_mid);
    }
  }

  if (work_increment) {
    double w = 0.0;
    s_hi = integrate_step(s, mode, p, hi, projection_tol, &w);
    *work_increment += w;
  }
  if (at_event) *at_event = s_hi;
  return hi;
}

std::pair<GeneralizedState, ContactMode> default_initial_state(
    const ModelParams& p, const SimConfig& cfg) {
  p.validate();
  const double pi = 3.14159265358979323846;
  const double th1 = pi / 8.0 - cfg.theta_offset;

  GeneralizedState s;
  s.t = 0.0;
  s.q = VecX::Zero(p.dim());
  s.qd = VecX::Zero(p.dim());

  // Stance tip F1A at the origin; all centers stacked on the stance rim.
  const Vec2 center(p.L[0] * std::sin(th1), p.L[0] * std::cos(th1));
  for (int i = 0; i < 4; ++i) {
    s.q[qx(i)] = center.x();
    s.q[qz(i)] = center.y();
    s.q[qth(i)] = th1 + nominal_offset(i);
  }
  // Rigid forward roll about the stance tip.
  const Vec2 center_vel =
      p.L[0] * cfg.omega0 * Vec2(std::cos(th1), -std::sin(th1));
  for (int i = 0; i < 4; ++i) {
    s.qd[qx(i)] = center_vel.x();
    s.qd[qz(i)] = center_vel.y();
    s.qd[qth(i)] = cfg.omega0;
  }

  if (p.variant == Variant::kVcrw3) {
    const double th5 = p.theta5_ref;
    s.q[kQth5] = th5;
    const Vec2 com = center + 0.5 * p.L5 * upper_body_axis(th5);
    s.q[kQx5] = com.x();
    s.q[kQz5] = com.y();
    s.qd[kQx5] = center_vel.x();
    s.qd[kQz5] = center_vel.y();
    s.qd[kQth5] = 0.0;
  }

  const ContactMode mode = ContactMode::single(Foot::kF1A);
  return {project_velocities(s, mode, p), mode};
}

namespace {

// Position-level constraint violation: weld center mismatch, stance tip
// height, and (vcrw3) pin offset.
double position_drift(const GeneralizedState& s, const ContactMode& mode,
                      const ModelParams& p) {
  double drift = 0.0;
  for (int pair = 0; pair < 2; ++pair) {
    drift = std::max(drift, std::abs(s.q[qx(pair)] - s.q[qx(pair + 2)]));
    drift = std::max(drift, std::abs(s.q[qz(pair)] - s.q[qz(pair + 2)]));
  }
  drift = std::max(drift, std::abs(tip_position(s, p, mode.rear).y()));
  if (mode.is_double()) {
    drift = std::max(drift, std::abs(tip_position(s, p, mode.fore).y()));
  }
  if (p.variant == Variant::kVcrw3) {
    const double th5 = s.q[kQth5];
    const Vec2 com(s.q[kQx5], s.q[kQz5]);
    const Vec2 pin(s.q[qx(0)], s.q[qz(0)]);
    const Vec2 expect = pin + 0.5 * p.L5 * upper_body_axis(th5);
    drift = std::max(drift, (com - expect).lpNorm<Eigen::Infinity>());
  }
  return drift;
}

class Runner {
 public:
  Runner(const ModelParams& p, const SimConfig& cfg,
         const GeneralizedState& initial, const ContactMode& mode0)
      : p_(p), cfg_(cfg), state_(initial), mode_(mode0) {}

  Trajectory run() {
    p_.validate();
    check_state(state_, p_);
    if (constraint_residual(state_, mode_, p_) > 1e-6) {
      throw std::invalid_argument(
          "simulate: initial velocities violate the constraints");
    }
    if (std::abs(tip_position(state_, p_, mode_.rear).y()) > 1e-9) {
      throw std::invalid_argument("simulate: stance tip not on the floor");
    }

    const double t_end = state_.t + cfg_.duration;
    try {
      refresh_forces();
      record_sample();
      while (traj_.outcome == Outcome::kCompleted && state_.t < t_end &&
             t_end - state_.t > 1e-15) {
        step_once(std::min(cfg_.dt, t_end - state_.t));
      }
    } catch (const SolverError& e) {
      fail(e.what());
    } catch (const UncontrollableError& e) {
      fail(e.what());
    }
    // Close the record at the final state.
    if (traj_.samples.empty() || traj_.samples.back().t != state_.t) {
      record_sample();
    }
    traj_.end_time = state_.t;
    return std::move(traj_);
  }

 private:
  // Assist torque and constraint forces at the current state.
  void refresh_forces() {
    u_now_ = 0.0;
    if (p_.variant == Variant::kVcrw3) {
      u_now_ = control_torque(state_, mode_, p_);
    }
    lambda_now_ = contact_forces(state_, mode_, p_, u_now_);
  }

  double guard_now() const {
    if (mode_.is_double()) return liftoff_guard(lambda_now_, mode_);
    return touchdown_guard(state_, mode_, p_);
  }

  double guard_of(const GeneralizedState& s) const {
    if (mode_.is_double()) {
      double u = 0.0;
      if (p_.variant == Variant::kVcrw3) u = control_torque(s, mode_, p_);
      return liftoff_guard(contact_forces(s, mode_, p_, u), mode_);
    }
    return touchdown_guard(s, mode_, p_);
  }

  void step_once(double h) {
    const double g0 = guard_now();
    double work_inc = 0.0;
    GeneralizedState next =
        integrate_step(state_, mode_, p_, h, cfg_.projection_tol, &work_inc);
    const double g1 = guard_of(next);

    if (g0 > 0.0 && g1 <= 0.0) {
      // Hybrid transition inside this step: localize, then switch.
      work_inc = 0.0;
      GeneralizedState at_event;
      locate_event(
          state_, mode_, p_,
          [this](const GeneralizedState& s) { return guard_of(s); }, h,
          cfg_.event_tol, cfg_.projection_tol, &at_event, &work_inc);
      work_ += work_inc;
      state_ = at_event;
      if (mode_.is_double()) {
        apply_liftoff();
      } else {
        apply_touchdown();
      }
      if (traj_.outcome != Outcome::kCompleted) return;
      refresh_forces();
      // A touchdown can hand over a rear contact that is already unloading;
      // release it immediately rather than integrating a pulling contact.
      if (mode_.is_double() && liftoff_guard(lambda_now_, mode_) <= 0.0) {
        apply_liftoff();
        refresh_forces();
      }
      record_sample();
    } else {
      work_ += work_inc;
      state_ = next;
      ++steps_since_record_;
      refresh_forces();
      if (cfg_.record_stride > 0 &&
          steps_since_record_ >= cfg_.record_stride) {
        record_sample();
      }
    }
    check_failures();
  }

  void apply_touchdown() {
    const Foot rear = mode_.rear;
    const Foot fore = next_foot(rear);
    const ImpactResult impact = impact_map(state_, state_.qd, rear, fore, p_);

    TransitionEvent ev;
    ev.kind = TransitionEvent::Kind::kTouchdown;
    ev.t = state_.t;
    ev.mode_pre = mode_;
    ev.mode_post = ContactMode::double_support(rear, fore);
    ev.q = state_.q;
    ev.qd_pre = state_.qd;
    ev.qd_post = impact.qd_post;
    ev.impulse = impact.impulse;
    ev.work = work_;

    state_.qd = impact.qd_post;
    mode_ = ev.mode_post;
    traj_.events.push_back(std::move(ev));
    note_drift();
  }

  void apply_liftoff() {
    TransitionEvent ev;
    ev.kind = TransitionEvent::Kind::kLiftoff;
    ev.t = state_.t;
    ev.mode_pre = mode_;
    ev.mode_post = ContactMode::single(mode_.fore);
    ev.q = state_.q;
    ev.qd_pre = state_.qd;
    ev.qd_post = state_.qd;
    ev.work = work_;

    // The pin contact releases with a nonzero tangential force, which kicks
    // the freed tip a few microns below the floor before the roll lifts it.
    // Exempt that foot from the scuff check until it has cleared.
    clearing_ = mode_.rear;
    has_clearing_ = true;

    mode_ = ev.mode_post;
    traj_.events.push_back(std::move(ev));
    note_drift();
  }

  void note_drift() {
    traj_.max_position_drift = std::max(
        traj_.max_position_drift, position_drift(state_, mode_, p_));
  }

  void check_failures() {
    if (traj_.outcome != Outcome::kCompleted) return;

    // Support forces must push, never pull.
    if (lambda_now_[1] < -1e-9) {
      fail(mode_.is_double() ? "rear support force negative"
                             : "stance support force negative");
      return;
    }
    if (mode_.is_double() && lambda_now_[3] < -1e-9) {
      fail("fore support force negative");
      return;
    }

    // No tip other than the stance/guarded ones may go below the floor.
    const auto tips = tip_positions(state_, p_);
    if (has_clearing_) {
      const double z = tips[static_cast<int>(clearing_)].y();
      if (z > 1e-6) {
        has_clearing_ = false;  // cleared: normal check applies again
      } else if (z < -1e-3) {
        fail(std::string("foot ") + to_string(clearing_) +
             " scuffed the floor");
        return;
      }
    }
    for (int f = 0; f < kNumFeet; ++f) {
      const Foot foot = static_cast<Foot>(f);
      if (foot == mode_.rear) continue;
      if (mode_.is_double() && foot == mode_.fore) continue;
      if (!mode_.is_double() && foot == next_foot(mode_.rear)) continue;
      if (has_clearing_ && foot == clearing_) continue;
      if (tips[f].y() < -1e-6) {
        fail(std::string("foot ") + to_string(foot) + " scuffed the floor");
        return;
      }
    }

    for (int i = 0; i < 4; ++i) {
      if (std::abs(state_.qd[qth(i)]) > 1e3) {
        fail("angular velocity blow-up");
        return;
      }
    }
  }

  void fail(const std::string& reason) {
    traj_.outcome = Outcome::kFailed;
    traj_.failure_reason = reason;

    TransitionEvent ev;
    ev.kind = TransitionEvent::Kind::kFailure;
    ev.t = state_.t;
    ev.mode_pre = mode_;
    ev.mode_post = mode_;
    ev.q = state_.q;
    ev.qd_pre = state_.qd;
    ev.qd_post = state_.qd;
    ev.work = work_;
    ev.reason = reason;
    traj_.events.push_back(std::move(ev));
  }

  void record_sample() {
    Sample smp;
    smp.t = state_.t;
    smp.q = state_.q;
    smp.qd = state_.qd;
    smp.mode = mode_;
    smp.lambda = lambda_now_;
    smp.u = u_now_;
    smp.work = work_;
    traj_.samples.push_back(std::move(smp));
    steps_since_record_ = 0;
  }

  ModelParams p_;
  SimConfig cfg_;
  GeneralizedState state_;
  ContactMode mode_;
  Trajectory traj_;
  VecX lambda_now_;
  double u_now_ = 0.0;
  double work_ = 0.0;
  int steps_since_record_ = 0;
  Foot clearing_ = Foot::kF1A;  // just-lifted foot, exempt until it clears
  bool has_clearing_ = false;
};

}  // namespace

Trajectory simulate(const ModelParams& p, const SimConfig& cfg,
                    const GeneralizedState& initial, const ContactMode& mode0) {
  return Runner(p, cfg, initial, mode0).run();
}

Trajectory simulate(const ModelParams& p, const SimConfig& cfg) {
  const auto [state, mode] = default_initial_state(p, cfg);
  return simulate(p, cfg, state, mode);
}

}  // namespace vcrw
