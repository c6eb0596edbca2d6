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

#ifndef VCRW_CSV_H_
#define VCRW_CSV_H_

#include <iosfwd>
#include <string>
#include <vector>

#include "vcrw/analysis.hpp"
#include "vcrw/sim.hpp"

// CSV emission.  Numbers carry 17 significant digits so every double
// round-trips exactly; schemas are stable.

namespace vcrw {

// printf("%.17g") formatting.
std::string format_g17(double x);

// t,x1,z1,th1,...,x4,z4,th4[,th5],mode,vgrf_rear,vgrf_fore[,u]
// (th5 and u columns appear for vcrw3 only).
void write_timeseries_csv(std::ostream& os, const Trajectory& traj,
                          const ModelParams& p);

// t,kind,rear,fore,impulse_norm
void write_events_csv(std::ostream& os, const Trajectory& traj);

// phi,b,period_mean,length_mean,speed_mean,periodicity,outcome
// (periodicity 0 = aperiodic; means are nan for failed cells).
void write_sweep_csv(std::ostream& os, const SweepTable& table);

// frame_idx,segment_id,x0,z0,x1,z1 (marker rows repeat the point).
void write_stick_csv(std::ostream& os, const std::vector<StickSegment>& segs);

// Minimal reader for round-trip checks: splits a CSV document into cells.
std::vector<std::vector<std::string>> parse_csv(std::istream& is);

}  // namespace vcrw

#endif  // VCRW_CSV_H_
