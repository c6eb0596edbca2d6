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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "support/oracles.hpp"
#include "vcrw/dynamics.hpp"
#include "vcrw/sim.hpp"

using namespace vcrw;
using test::random_feasible_state;

namespace {

// Integrates `steps` RK4 steps of size h from `s0` with velocity projection
// switched off, so the raw integrator order is visible.
GeneralizedState integrate_raw(const GeneralizedState& s0,
                               const ContactMode& mode, const ModelParams& p,
                               double h, int steps) {
  GeneralizedState s = s0;
  for (int i = 0; i < steps; ++i) s = integrate_step(s, mode, p, h, 1e99);
  return s;
}

double state_distance(const GeneralizedState& a, const GeneralizedState& b) {
  return (a.q - b.q).lpNorm<Eigen::Infinity>() +
         (a.qd - b.qd).lpNorm<Eigen::Infinity>();
}

}  // namespace

TEST_CASE("the integrator converges at fourth order") {
  const ModelParams p = default_params(Variant::kVcrw2);
  SimConfig cfg;
  cfg.omega0 = 1.2;
  const auto [s0, mode] = default_initial_state(p, cfg);

  // 0.04 s window, well before the first touchdown.
  const double h = 2e-3;
  const GeneralizedState ref = integrate_raw(s0, mode, p, h / 8.0, 160);
  const double e1 = state_distance(integrate_raw(s0, mode, p, h, 20), ref);
  const double e2 =
      state_distance(integrate_raw(s0, mode, p, h / 2.0, 40), ref);
  const double ratio = e1 / e2;
  CHECK(ratio > 12.0);
  CHECK(ratio < 22.0);
}

TEST_CASE("a force-free rest state is an exact fixed point") {
  ModelParams p = default_params(Variant::kVcrw2);
  p.g = 1e-30;  // effectively weightless
  p.L0 = 2.0 * p.b[0] * std::sin(M_PI / 8.0);
  GeneralizedState s;
  s.t = 0.0;
  s.q = VecX::Zero(12);
  s.qd = VecX::Zero(12);
  for (int i = 0; i < 4; ++i) {
    s.q[qz(i)] = 0.3;
    s.q[qth(i)] = nominal_offset(i);
  }
  GeneralizedState out = s;
  for (int i = 0; i < 10; ++i)
    out = integrate_step(out, ContactMode::single(Foot::kF1A), p, 1e-3);
  CHECK((out.q - s.q).lpNorm<Eigen::Infinity>() < 1e-12);
  CHECK(out.qd.lpNorm<Eigen::Infinity>() < 1e-12);
  CHECK(out.t == doctest::Approx(0.01));
}

TEST_CASE("velocity projection lands on the constraint manifold") {
  for (Variant v : {Variant::kVcrw1, Variant::kVcrw2, Variant::kVcrw3}) {
    const ModelParams p = default_params(v);
    const MatX M = mass_matrix(p);
    std::mt19937 rng(5001u + static_cast<unsigned>(v));
    for (int i = 0; i < 10; ++i) {
      const Foot rear = static_cast<Foot>(i % kNumFeet);
      const ContactMode mode =
          (i % 2) ? ContactMode::double_support(rear, next_foot(rear))
                  : ContactMode::single(rear);
      const GeneralizedState s = random_feasible_state(p, mode, rng,
                                                       /*project=*/false);
      const ConstraintSet cs = constraint_set(s, mode, p);
      const GeneralizedState s2 = project_velocities(s, mode, p);

      // Residual is gone, the position is untouched, energy cannot rise.
      CHECK((cs.J * s2.qd).lpNorm<Eigen::Infinity>() < 1e-12);
      CHECK((s2.q - s.q).lpNorm<Eigen::Infinity>() == 0.0);
      CHECK(0.5 * s2.qd.dot(M * s2.qd) <= 0.5 * s.qd.dot(M * s.qd) + 1e-12);

      // Idempotent, and it matches the independent LU-based projector.
      const GeneralizedState s3 = project_velocities(s2, mode, p);
      CHECK((s3.qd - s2.qd).lpNorm<Eigen::Infinity>() < 1e-12);
      const VecX oracle = test::project_kernel_lu(M, cs.J, s.qd);
      CHECK((s2.qd - oracle).lpNorm<Eigen::Infinity>() < 1e-10);
    }
  }
}

TEST_CASE("event localization bisects to the requested precision") {
  const ModelParams p = default_params(Variant::kVcrw2);
  SimConfig cfg;
  const auto [s0, mode] = default_initial_state(p, cfg);

  // A guard that is linear in time crosses exactly halfway through the step.
  const double t_star = s0.t + 5e-4;
  const auto guard = [&](const GeneralizedState& s) { return t_star - s.t; };
  GeneralizedState at_event;
  const double dt =
      locate_event(s0, mode, p, guard, 1e-3, 1e-10, 1e-9, &at_event);
  CHECK(dt == doctest::Approx(5e-4).epsilon(1e-6));
  CHECK(std::abs(at_event.t - t_star) < 1e-10);

  // Without a sign change the bracket is rejected.
  const auto positive = [](const GeneralizedState&) { return 1.0; };
  CHECK_THROWS_AS(
      locate_event(s0, mode, p, positive, 1e-3, 1e-10, 1e-9, &at_event),
      std::invalid_argument);
}

TEST_CASE("stiff-ring arc time matches the rigid-wheel quadrature") {
  // With a near-rigid ring the locked variant rolls like a rigid eight-
  // spoke wheel; the touchdown time then has a closed quadrature form.
  ModelParams p = default_params(Variant::kVcrw1);
  p.k = 1e6;
  p.L0 = 2.0 * p.b[0] * std::sin(M_PI / 8.0);
  SimConfig cfg;
  cfg.duration = 0.5;
  cfg.record_stride = 0;
  const Trajectory traj = simulate(p, cfg);
  REQUIRE(!traj.events.empty());
  const TransitionEvent& td = traj.events.front();
  REQUIRE(td.kind == TransitionEvent::Kind::kTouchdown);

  const double th0 = M_PI / 8.0 - cfg.theta_offset;  // = 0: launch upright
  const double oracle = test::rigid_wheel_arc_time(p, th0, cfg.omega0);
  CHECK(std::abs(td.t - oracle) < 1e-4);
}

TEST_CASE("default initial state is consistent for every variant") {
  for (Variant v : {Variant::kVcrw1, Variant::kVcrw2, Variant::kVcrw3}) {
    const ModelParams p = default_params(v);
    SimConfig cfg;
    const auto [s, mode] = default_initial_state(p, cfg);
    CHECK(mode == ContactMode::single(Foot::kF1A));

    // Stance tip at the origin, limbs at exact quarter-turn offsets.
    CHECK(tip_position(s, p, Foot::kF1A).norm() < 1e-14);
    const double stance = M_PI / 8.0 - cfg.theta_offset;
    for (int i = 0; i < 4; ++i)
      CHECK(s.q[qth(i)] ==
            doctest::Approx(stance + nominal_offset(i)).epsilon(1e-14));

    // Rigid forward roll about the tip: every limb angle rate is omega0 and
    // the state already satisfies every velocity constraint.
    for (int i = 0; i < 4; ++i)
      CHECK(s.qd[qth(i)] == doctest::Approx(cfg.omega0).epsilon(1e-12));
    const ConstraintSet cs = constraint_set(s, mode, p);
    CHECK((cs.J * s.qd).lpNorm<Eigen::Infinity>() < 1e-12);
    CHECK(tip_velocity(s, p, Foot::kF1A).norm() < 1e-12);

    if (v == Variant::kVcrw3) {
      CHECK(s.q[kQth5] == p.theta5_ref);
      CHECK(s.qd[kQth5] == 0.0);
      const Vec2 pin = limb_center(s, 0);
      CHECK(s.q[kQx5] ==
            doctest::Approx(pin.x() + 0.5 * p.L5 * std::cos(p.theta5_ref)));
      CHECK(s.q[kQz5] ==
            doctest::Approx(pin.y() + 0.5 * p.L5 * std::sin(p.theta5_ref)));
    }
  }
}

TEST_CASE("a downhill free-cross run is well formed end to end") {
  const ModelParams p = default_params(Variant::kVcrw2);
  SimConfig cfg;  // phi = 0.1 by default for this variant
  const Trajectory traj = simulate(p, cfg);

  CHECK(traj.outcome == Outcome::kCompleted);
  CHECK(traj.end_time == doctest::Approx(cfg.duration));
  CHECK(traj.max_position_drift < 1e-7);
  REQUIRE(traj.events.size() >= 10);

  // Events strictly alternate touchdown/liftoff and chain the stance feet.
  for (size_t i = 0; i < traj.events.size(); ++i) {
    const TransitionEvent& ev = traj.events[i];
    if (i % 2 == 0) {
      CHECK(ev.kind == TransitionEvent::Kind::kTouchdown);
      CHECK(!ev.mode_pre.is_double());
      CHECK(ev.mode_post.is_double());
      CHECK(ev.mode_post.rear == ev.mode_pre.rear);
      CHECK(ev.mode_post.fore == next_foot(ev.mode_pre.rear));
      // Touchdowns dissipate; the recorded velocities agree.
      const MatX M = mass_matrix(p);
      CHECK(0.5 * ev.qd_post.dot(M * ev.qd_post) <=
            0.5 * ev.qd_pre.dot(M * ev.qd_pre) + 1e-12);
      CHECK(ev.impulse.size() > 0);
    } else {
      CHECK(ev.kind == TransitionEvent::Kind::kLiftoff);
      CHECK(ev.mode_pre.is_double());
      CHECK(!ev.mode_post.is_double());
      CHECK(ev.mode_post.rear == ev.mode_pre.fore);
    }
    if (i > 0) CHECK(ev.t > traj.events[i - 1].t);
  }

  // Samples are time-ordered with small velocity residuals, and the total
  // mechanical energy never rises (passive machine, dissipative contacts).
  double prev_t = -1.0;
  double prev_e = std::numeric_limits<double>::infinity();
  for (const Sample& smp : traj.samples) {
    CHECK(smp.t > prev_t);
    prev_t = smp.t;
    GeneralizedState s;
    s.t = smp.t;
    s.q = smp.q;
    s.qd = smp.qd;
    const ConstraintSet cs = constraint_set(s, smp.mode, p);
    CHECK((cs.J * s.qd).lpNorm<Eigen::Infinity>() < 1e-8);
    const double e = test::total_energy(s, p);
    CHECK(e <= prev_e + 1e-8);
    prev_e = e;
    CHECK(smp.u == 0.0);
    CHECK(smp.work == 0.0);
  }
}

TEST_CASE("locked cross angles stay welded through impacts") {
  const ModelParams p = default_params(Variant::kVcrw1);
  SimConfig cfg;
  cfg.duration = 1.2;
  const Trajectory traj = simulate(p, cfg);
  CHECK(traj.outcome == Outcome::kCompleted);
  const double d0 = traj.samples.front().q[qth(0)] -
                    traj.samples.front().q[qth(2)];
  for (const Sample& smp : traj.samples) {
    CHECK(std::abs(smp.q[qth(0)] - smp.q[qth(2)] - d0) < 1e-9);
    CHECK(std::abs(smp.q[qth(1)] - smp.q[qth(3)] - d0) < 1e-9);
  }
}

TEST_CASE("identical configurations give bit-identical trajectories") {
  const ModelParams p = default_params(Variant::kVcrw2);
  SimConfig cfg;
  cfg.duration = 1.0;
  const Trajectory a = simulate(p, cfg);
  const Trajectory b = simulate(p, cfg);
  REQUIRE(a.samples.size() == b.samples.size());
  REQUIRE(a.events.size() == b.events.size());
  for (size_t i = 0; i < a.samples.size(); ++i) {
    CHECK(a.samples[i].t == b.samples[i].t);
    CHECK(a.samples[i].q == b.samples[i].q);
    CHECK(a.samples[i].qd == b.samples[i].qd);
    CHECK(a.samples[i].lambda == b.samples[i].lambda);
  }
  for (size_t i = 0; i < a.events.size(); ++i)
    CHECK(a.events[i].t == b.events[i].t);
}

TEST_CASE("a stalling launch fails with a scuff diagnosis") {
  ModelParams p = default_params(Variant::kVcrw2);
  p.phi = 0.0;
  SimConfig cfg;
  cfg.omega0 = 0.5;  // not enough momentum to climb over the stance tip
  cfg.duration = 5.0;
  const Trajectory traj = simulate(p, cfg);
  CHECK(traj.outcome == Outcome::kFailed);
  CHECK(traj.failure_reason.find("scuffed") != std::string::npos);
  CHECK(traj.end_time < cfg.duration);
  REQUIRE(!traj.events.empty());
  CHECK(traj.events.back().kind == TransitionEvent::Kind::kFailure);
  CHECK(traj.events.back().reason == traj.failure_reason);
}

TEST_CASE("the assisted walker reports torque and accumulates work") {
  const ModelParams p = default_params(Variant::kVcrw3);
  SimConfig cfg;
  cfg.duration = 1.0;
  const Trajectory traj = simulate(p, cfg);
  CHECK(traj.outcome == Outcome::kCompleted);

  double prev_work = 0.0;
  bool torque_seen = false;
  for (const Sample& smp : traj.samples) {
    CHECK(smp.work >= prev_work);  // positive-part accumulation
    prev_work = smp.work;
    torque_seen = torque_seen || std::abs(smp.u) > 1e-6;
  }
  CHECK(torque_seen);
  CHECK(traj.samples.back().work > 0.0);
}
