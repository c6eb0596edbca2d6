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

#include "vcrw/analysis.hpp"

#include <atomic>
#include <cmath>
#include <thread>

namespace vcrw {

std::vector<StepRecord> step_descriptors(const Trajectory& traj,
                                         const ModelParams& p) {
  // Contact points and cumulative work at each touchdown.
  struct Touchdown {
    double t;
    Vec2 contact;
    double work;
  };
  std::vector<Touchdown> tds;
  for (const TransitionEvent& ev : traj.events) {
    if (ev.kind != TransitionEvent::Kind::kTouchdown) continue;
    GeneralizedState s{ev.t, ev.q, ev.qd_post};
    tds.push_back({ev.t, tip_position(s, p, ev.mode_post.fore), ev.work});
  }

  double total_weight = 0.0;
  for (int i = 0; i < 4; ++i) total_weight += p.m[i];
  if (p.variant == Variant::kVcrw3) total_weight += p.m5;
  total_weight *= p.g;

  std::vector<StepRecord> steps;
  for (size_t i = 0; i + 1 < tds.size(); ++i) {
    StepRecord r;
    r.index = static_cast<int>(i);
    r.t_start = tds[i].t;
    r.t_end = tds[i + 1].t;
    r.period = r.t_end - r.t_start;
    r.contact_start = tds[i].contact;
    r.contact_end = tds[i + 1].contact;
    r.length = tds[i + 1].contact.x() - tds[i].contact.x();
    r.speed = r.period > 0.0 ? r.length / r.period : 0.0;
    r.work = tds[i + 1].work - tds[i].work;
    r.specific_resistance =
        r.length > 0.0 ? r.work / (total_weight * r.length) : 0.0;
    steps.push_back(r);
  }
  return steps;
}

int detect_periodicity(std::span<const StepRecord> steps, double rel_tol) {
  auto k_periodic = [&](int k) {
    if (steps.size() < static_cast<size_t>(2 * k)) return false;
    for (size_t i = 0; i + k < steps.size(); ++i) {
      const double dp = std::abs(steps[i + k].period - steps[i].period);
      const double dl = std::abs(steps[i + k].length - steps[i].length);
      if (dp > rel_tol * std::abs(steps[i].period)) return false;
      if (dl > rel_tol * std::abs(steps[i].length)) return false;
    }
    return true;
  };
  for (int k = 1; k <= 4; ++k) {
    if (k_periodic(k)) return k;
  }
  return 0;
}

namespace {

SweepCell sweep_cell(const ModelParams& base, const SimConfig& cfg,
                     double phi, double b, double settle_time,
                     int measure_steps) {
  ModelParams p = base;
  p.phi = phi;
  p.b = {b, b, b, b};

  SimConfig run_cfg = cfg;
  run_cfg.duration = settle_time + 2.0 * measure_steps;
  run_cfg.record_stride = 0;  // descriptors need events only

  SweepCell cell;
  cell.phi = phi;
  cell.b = b;

  Trajectory traj;
  try {
    traj = simulate(p, run_cfg);
  } catch (const std::exception&) {
    return cell;  // unusable cell; reported as not completed
  }
  if (traj.outcome != Outcome::kCompleted) return cell;

  const std::vector<StepRecord> all = step_descriptors(traj, p);
  std::vector<StepRecord> window;
  for (const StepRecord& r : all) {
    if (r.t_start >= settle_time) window.push_back(r);
    if (window.size() == static_cast<size_t>(measure_steps)) break;
  }
  if (window.size() < static_cast<size_t>(measure_steps)) return cell;

  cell.completed = true;
  cell.periodicity = detect_periodicity(window);
  for (const StepRecord& r : window) {
    cell.period_mean += r.period;
    cell.length_mean += r.length;
    cell.speed_mean += r.speed;
  }
  cell.period_mean /= window.size();
  cell.length_mean /= window.size();
  cell.speed_mean /= window.size();
  return cell;
}

}  // namespace

SweepTable slope_sweep(const ModelParams& base, const SimConfig& cfg,
                       std::span<const double> phi_values,
                       std::span<const double> b_values, double settle_time,
                       int measure_steps) {
  SweepTable table;
  table.phi_values.assign(phi_values.begin(), phi_values.end());
  table.b_values.assign(b_values.begin(), b_values.end());
  const size_t n = phi_values.size() * b_values.size();
  table.cells.resize(n);

  // Cells are independent; distribute them over a small worker pool.  Each
  // cell writes only its own slot, so the table layout (phi outer, b inner)
  // is deterministic regardless of scheduling.
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const size_t idx = next.fetch_add(1);
      if (idx >= n) return;
      const double phi = phi_values[idx / b_values.size()];
      const double b = b_values[idx % b_values.size()];
      table.cells[idx] =
          sweep_cell(base, cfg, phi, b, settle_time, measure_steps);
    }
  };

  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  const size_t workers = std::min<size_t>(hw, n);
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (size_t i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
  }
  return table;
}

std::vector<StickSegment> stick_diagram(const Trajectory& traj,
                                        const ModelParams& p, double t0,
                                        double t1, int stride) {
  if (stride <= 0) throw std::invalid_argument("stick stride must be > 0");
  std::vector<StickSegment> out;
  int frame = 0;
  int counted = 0;
  for (const Sample& smp : traj.samples) {
    if (smp.t < t0 || smp.t > t1) continue;
    if (counted++ % stride != 0) continue;

    GeneralizedState s{smp.t, smp.q, smp.qd};
    for (int i = 0; i < 4; ++i) {
      StickSegment seg;
      seg.frame = frame;
      seg.id = "limb" + std::to_string(i + 1);
      seg.p0 = tip_position(s, p, static_cast<Foot>(i));      // A tip
      seg.p1 = tip_position(s, p, static_cast<Foot>(i + 4));  // B tip
      out.push_back(std::move(seg));
    }
    if (p.variant == Variant::kVcrw3) {
      StickSegment seg;
      seg.frame = frame;
      seg.id = "body";
      seg.p0 = Vec2(smp.q[qx(0)], smp.q[qz(0)]);
      const double th5 = smp.q[kQth5];
      seg.p1 = seg.p0 + p.L5 * upper_body_axis(th5);
      out.push_back(std::move(seg));
    }
    StickSegment g13;
    g13.frame = frame;
    g13.id = "G13";
    g13.p0 = g13.p1 = limb_center(s, 0);
    out.push_back(std::move(g13));
    StickSegment g24;
    g24.frame = frame;
    g24.id = "G24";
    g24.p0 = g24.p1 = limb_center(s, 1);
    out.push_back(std::move(g24));
    ++frame;
  }
  return out;
}

}  // namespace vcrw
