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

#include "vcrw/csv.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace vcrw {

std::string format_g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void write_timeseries_csv(std::ostream& os, const Trajectory& traj,
                          const ModelParams& p) {
  const bool assisted = p.variant == Variant::kVcrw3;
  os << "t";
  for (int i = 1; i <= 4; ++i) {
    os << ",x" << i << ",z" << i << ",th" << i;
  }
  if (assisted) os << ",th5";
  os << ",mode,vgrf_rear,vgrf_fore";
  if (assisted) os << ",u";
  os << "\n";

  for (const Sample& s : traj.samples) {
    os << format_g17(s.t);
    for (int i = 0; i < 4; ++i) {
      os << ',' << format_g17(s.q[qx(i)]) << ',' << format_g17(s.q[qz(i)])
         << ',' << format_g17(s.q[qth(i)]);
    }
    if (assisted) os << ',' << format_g17(s.q[kQth5]);
    const double rear = s.lambda.size() > 1 ? s.lambda[1] : 0.0;
    const double fore =
        s.mode.is_double() && s.lambda.size() > 3 ? s.lambda[3] : 0.0;
    os << ',' << s.mode.name() << ',' << format_g17(rear) << ','
       << format_g17(fore);
    if (assisted) os << ',' << format_g17(s.u);
    os << "\n";
  }
}

void write_events_csv(std::ostream& os, const Trajectory& traj) {
  os << "t,kind,rear,fore,impulse_norm\n";
  for (const TransitionEvent& ev : traj.events) {
    std::string rear;
    std::string fore;
    switch (ev.kind) {
      case TransitionEvent::Kind::kTouchdown:
        rear = to_string(ev.mode_post.rear);
        fore = to_string(ev.mode_post.fore);
        break;
      case TransitionEvent::Kind::kLiftoff:
        rear = to_string(ev.mode_pre.rear);
        fore = to_string(ev.mode_pre.fore);
        break;
      case TransitionEvent::Kind::kFailure:
        rear = to_string(ev.mode_pre.rear);
        if (ev.mode_pre.is_double()) fore = to_string(ev.mode_pre.fore);
        break;
    }
    const double impulse =
        ev.impulse.size() > 0 ? ev.impulse.norm() : 0.0;
    os << format_g17(ev.t) << ',' << to_string(ev.kind) << ',' << rear << ','
       << fore << ',' << format_g17(impulse) << "\n";
  }
}

void write_sweep_csv(std::ostream& os, const SweepTable& table) {
  os << "phi,b,period_mean,length_mean,speed_mean,periodicity,outcome\n";
  for (const SweepCell& cell : table.cells) {
    const double nan = std::nan("");
    os << format_g17(cell.phi) << ',' << format_g17(cell.b) << ','
       << format_g17(cell.completed ? cell.period_mean : nan) << ','
       << format_g17(cell.completed ? cell.length_mean : nan) << ','
       << format_g17(cell.completed ? cell.speed_mean : nan) << ','
       << cell.periodicity << ','
       << (cell.completed ? "completed" : "failed") << "\n";
  }
}

void write_stick_csv(std::ostream& os, const std::vector<StickSegment>& segs) {
  os << "frame_idx,segment_id,x0,z0,x1,z1\n";
  for (const StickSegment& seg : segs) {
    os << seg.frame << ',' << seg.id << ',' << format_g17(seg.p0.x()) << ','
       << format_g17(seg.p0.y()) << ',' << format_g17(seg.p1.x()) << ','
       << format_g17(seg.p1.y()) << "\n";
  }
}

std::vector<std::vector<std::string>> parse_csv(std::istream& is) {
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.push_back("");
    rows.push_back(std::move(cells));
  }
  return rows;
}

}  // namespace vcrw
