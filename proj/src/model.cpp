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

#include "vcrw/model.hpp"

#include <cmath>
#include <numbers>

namespace vcrw {

namespace {

// Ring topology in the nominal pose (see spring_elements).  Anchors are
// (limb, sign) pairs; cross A owns limbs 0 and 2, cross B limbs 1 and 3.
// Walking around the nominal circle of anchor points, consecutive entries
// alternate between the crosses; each element joins two neighbours.
constexpr struct {
  int limb_a;
  double sign_a;
  int limb_b;
  double sign_b;
} kRing[kNumSprings] = {
    {2, +1.0, 3, +1.0}, {0, -1.0, 3, +1.0}, {0, -1.0, 1, -1.0},
    {2, -1.0, 1, -1.0}, {2, -1.0, 3, -1.0}, {0, +1.0, 3, -1.0},
    {0, +1.0, 1, +1.0}, {2, +1.0, 1, +1.0},
};

}  // namespace

const char* to_string(Variant v) {
  switch (v) {
    case Variant::kVcrw1:
      return "vcrw1";
    case Variant::kVcrw2:
      return "vcrw2";
    case Variant::kVcrw3:
      return "vcrw3";
  }
  return "?";
}

Variant variant_from_string(const std::string& name) {
  if (name == "vcrw1") return Variant::kVcrw1;
  if (name == "vcrw2") return Variant::kVcrw2;
  if (name == "vcrw3") return Variant::kVcrw3;
  throw std::invalid_argument("unknown variant: " + name);
}

int limb_of(Foot f) { return static_cast<int>(f) % 4; }

double side_of(Foot f) { return static_cast<int>(f) < 4 ? 1.0 : -1.0; }

const char* to_string(Foot f) {
  static const char* kNames[kNumFeet] = {"F1A", "F2A", "F3A", "F4A",
                                         "F1B", "F2B", "F3B", "F4B"};
  return kNames[static_cast<int>(f)];
}

ContactMode ContactMode::single(Foot stance) {
  ContactMode m;
  m.phase = Phase::kSingle;
  m.rear = stance;
  m.fore = stance;
  return m;
}

ContactMode ContactMode::double_support(Foot rear, Foot fore) {
  // The leading foot is always the rear foot's successor in touchdown order.
  if (static_cast<int>(fore) != (static_cast<int>(rear) + 1) % kNumFeet) {
    throw std::invalid_argument("double support feet must be consecutive");
  }
  ContactMode m;
  m.phase = Phase::kDouble;
  m.rear = rear;
  m.fore = fore;
  return m;
}

std::string ContactMode::name() const {
  if (is_double()) {
    return std::string("DLS_") + to_string(rear) + "_" + to_string(fore);
  }
  return std::string("SLS_") + to_string(rear);
}

void ModelParams::validate() const {
  for (int i = 0; i < 4; ++i) {
    if (!(m[i] > 0.0)) throw std::invalid_argument("limb mass must be > 0");
    if (!(a[i] > 0.0)) throw std::invalid_argument("gyration radius must be > 0");
    if (!(L[i] > 0.0)) throw std::invalid_argument("limb length must be > 0");
    if (!(b[i] > 0.0) || b[i] >= L[i]) {
      throw std::invalid_argument("anchor offset must satisfy 0 < b < L");
    }
  }
  if (k < 0.0 || c < 0.0) {
    throw std::invalid_argument("spring constants must be >= 0");
  }
  if (!(L0 > 0.0)) throw std::invalid_argument("natural length must be > 0");
  if (!(g > 0.0)) throw std::invalid_argument("gravity must be > 0");
  if (std::abs(phi) >= std::numbers::pi / 2) {
    throw std::invalid_argument("slope must satisfy |phi| < pi/2");
  }
  if (variant == Variant::kVcrw3) {
    if (!(L5 > 0.0) || !(m5 > 0.0) || !(I5 > 0.0)) {
      throw std::invalid_argument("upper-body parameters must be > 0");
    }
    if (Kp < 0.0 || Kd < 0.0) {
      throw std::invalid_argument("servo gains must be >= 0");
    }
  }
}

ModelParams default_params(Variant v) {
  ModelParams p;
  p.variant = v;
  if (v == Variant::kVcrw3) p.phi = 0.0;  // assisted walker runs on the level
  return p;
}

std::array<SpringElement, kNumSprings> spring_elements(const ModelParams& p) {
  std::array<SpringElement, kNumSprings> out;
  for (int j = 0; j < kNumSprings; ++j) {
    out[j].end_a = SpringAnchor{kRing[j].limb_a, kRing[j].sign_a};
    out[j].end_b = SpringAnchor{kRing[j].limb_b, kRing[j].sign_b};
    out[j].rest_length = p.L0;
    out[j].stiffness = p.k;
    out[j].damping = p.c;
  }
  return out;
}

double nominal_offset(int limb) {
  return -limb * std::numbers::pi / 4.0;
}

void check_state(const GeneralizedState& s, const ModelParams& p) {
  if (s.q.size() != p.dim() || s.qd.size() != p.dim()) {
    throw std::invalid_argument("state dimension does not match variant");
  }
}

Vec2 limb_center(const GeneralizedState& s, int limb) {
  return Vec2(s.q[qx(limb)], s.q[qz(limb)]);
}

Vec2 limb_center_velocity(const GeneralizedState& s, int limb) {
  return Vec2(s.qd[qx(limb)], s.qd[qz(limb)]);
}

Vec2 tip_position(const GeneralizedState& s, const ModelParams& p, Foot f) {
  check_state(s, p);
  const int i = limb_of(f);
  const double sg = side_of(f);
  const double th = s.q[qth(i)];
  return limb_center(s, i) + sg * p.L[i] * Vec2(-std::sin(th), -std::cos(th));
}

Vec2 tip_velocity(const GeneralizedState& s, const ModelParams& p, Foot f) {
  check_state(s, p);
  const int i = limb_of(f);
  const double sg = side_of(f);
  const double th = s.q[qth(i)];
  const double thd = s.qd[qth(i)];
  return limb_center_velocity(s, i) +
         sg * p.L[i] * thd * Vec2(-std::cos(th), std::sin(th));
}

std::array<Vec2, kNumFeet> tip_positions(const GeneralizedState& s,
                                         const ModelParams& p) {
  check_state(s, p);
  std::array<Vec2, kNumFeet> out;
  for (int f = 0; f < kNumFeet; ++f) {
    out[f] = tip_position(s, p, static_cast<Foot>(f));
  }
  return out;
}

Vec2 anchor_position(const GeneralizedState& s, const ModelParams& p,
                     const SpringAnchor& anchor) {
  const int i = anchor.limb;
  const double th = s.q[qth(i)];
  return limb_center(s, i) +
         anchor.sign * p.b[i] * Vec2(-std::sin(th), -std::cos(th));
}

Vec2 anchor_velocity(const GeneralizedState& s, const ModelParams& p,
                     const SpringAnchor& anchor) {
  const int i = anchor.limb;
  const double th = s.q[qth(i)];
  const double thd = s.qd[qth(i)];
  return limb_center_velocity(s, i) +
         anchor.sign * p.b[i] * thd * Vec2(-std::cos(th), std::sin(th));
}

std::array<SpringState, kNumSprings> spring_geometry(const GeneralizedState& s,
                                                     const ModelParams& p) {
  check_state(s, p);
  const auto elements = spring_elements(p);
  std::array<SpringState, kNumSprings> out;
  for (int j = 0; j < kNumSprings; ++j) {
    SpringState& g = out[j];
    g.p_a = anchor_position(s, p, elements[j].end_a);
    g.p_b = anchor_position(s, p, elements[j].end_b);
    const Vec2 d = g.p_b - g.p_a;
    g.length = d.norm();
    if (g.length < 1e-12) {
      throw SingularGeometryError("spring element collapsed to a point");
    }
    g.unit = d / g.length;
    const Vec2 dv = anchor_velocity(s, p, elements[j].end_b) -
                    anchor_velocity(s, p, elements[j].end_a);
    g.rate = g.unit.dot(dv);
  }
  return out;
}

}  // namespace vcrw
