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

#ifndef VCRW_MODEL_H_
#define VCRW_MODEL_H_

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

// Planar model of a viscoelastically combined rimless-wheel walker: two
// four-legged crosses (limb pairs welded at their centers) coupled by a ring
// of eight spring-damper elements, walking on a slope-aligned floor (z = 0,
// +x pointing downhill).  Three variants:
//
//   vcrw1  - crosses additionally rotation-locked to each other (rigid shape)
//   vcrw2  - crosses free to rotate relative to each other
//   vcrw3  - vcrw2 plus an upper-body link pinned to the cross-A center and
//            a posture-servo torque acting between body and limb 1
//
// Coordinates: q = (x_i, z_i, theta_i) for limbs i = 1..4, plus
// (x_5, z_5, theta_5) for the upper body in vcrw3.  Limb theta is measured
// so that increasing theta rolls the walker toward +x.  The upper-body angle
// theta_5 is measured from the forward horizontal: the link points along
// (cos theta_5, sin theta_5) from its pin, so theta_5 = 0 juts straight
// ahead and increasing theta_5 raises the link.

namespace vcrw {

using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;
using Vec2 = Eigen::Vector2d;

// Linear solve hit a (near-)singular constraint normal matrix.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Spring endpoints coincide; the element direction is undefined.
class SingularGeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The assist torque has (numerically) no authority over the posture angle.
class UncontrollableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Variant {
  kVcrw1,  // rotation-locked crosses
  kVcrw2,  // free crosses
  kVcrw3,  // free crosses + actuated upper body, level ground
};

const char* to_string(Variant v);
Variant variant_from_string(const std::string& name);  // "vcrw1" | "vcrw2" | "vcrw3"

// The eight foot tips in touchdown order.  Limb i carries tip A at
// G_i + L_i*(-sin theta_i, -cos theta_i) and tip B at the antipode.
enum class Foot : int {
  kF1A = 0,
  kF2A,
  kF3A,
  kF4A,
  kF1B,
  kF2B,
  kF3B,
  kF4B,
};

inline constexpr int kNumFeet = 8;

int limb_of(Foot f);      // 0-based limb index
double side_of(Foot f);   // +1 for A tips, -1 for B tips
const char* to_string(Foot f);

// Support phase plus the feet involved.  In single support `rear` is the
// stance foot; in double support `rear` is the trailing stance foot and
// `fore` the leading one (always the successor of `rear` in touchdown
// order).
struct ContactMode {
  enum class Phase { kSingle, kDouble };

  Phase phase = Phase::kSingle;
  Foot rear = Foot::kF1A;
  Foot fore = Foot::kF1A;  // meaningful in double support only

  static ContactMode single(Foot stance);
  static ContactMode double_support(Foot rear, Foot fore);

  bool is_double() const { return phase == Phase::kDouble; }
  std::string name() const;  // "SLS_F1A", "DLS_F1A_F2A", ...

  friend bool operator==(const ContactMode& a, const ContactMode& b) {
    return a.phase == b.phase && a.rear == b.rear &&
           (a.phase == ContactMode::Phase::kSingle || a.fore == b.fore);
  }
};

// Physical parameters.  Limb arrays are indexed by 0-based limb.
struct ModelParams {
  Variant variant = Variant::kVcrw2;

  std::array<double, 4> m{1.0, 1.0, 1.0, 1.0};      // limb mass [kg]
  std::array<double, 4> a{0.15, 0.15, 0.15, 0.15};  // gyration radius [m]
  std::array<double, 4> b{0.25, 0.25, 0.25, 0.25};  // spring anchor offset [m]
  std::array<double, 4> L{0.3, 0.3, 0.3, 0.3};      // center-to-tip length [m]

  double k = 200.0;  // spring stiffness [N/m]
  double c = 10.0;   // damper coefficient [N s/m]
  double L0 = 0.1;   // spring natural length [m]

  double phi = 0.1;  // slope angle [rad]; floor frame is slope-aligned
  double g = 9.8;    // gravity [m/s^2]

  // Upper body (vcrw3 only).
  double L5 = 0.3;        // link length [m]; COM sits at L5/2 from the pin
  double m5 = 1.0;        // link mass [kg]
  double I5 = 0.0225;     // link inertia about its COM [kg m^2]
  double Kp = 100.0;      // posture servo stiffness [1/s^2]
  double Kd = 20.0;       // posture servo damping [1/s]
  double theta5_ref = 0.3;  // commanded posture angle above horizontal [rad]

  int dim() const { return variant == Variant::kVcrw3 ? 15 : 12; }

  // Throws std::invalid_argument on non-physical values.
  void validate() const;
};

// Reference parameter set for a variant (vcrw3 implies level ground).
ModelParams default_params(Variant v);

// Generalized position/velocity at time t.
struct GeneralizedState {
  double t = 0.0;
  VecX q;
  VecX qd;
};

// Coordinate indices of limb i (0-based); upper-body block starts at 12.
inline int qx(int limb) { return 3 * limb; }
inline int qz(int limb) { return 3 * limb + 1; }
inline int qth(int limb) { return 3 * limb + 2; }
inline constexpr int kQx5 = 12;
inline constexpr int kQz5 = 13;
inline constexpr int kQth5 = 14;

// A spring anchor on limb `limb` at G + sign*b*(-sin theta, -cos theta).
struct SpringAnchor {
  int limb;
  double sign;  // +1 toward tip A, -1 toward tip B
};

// One viscoelastic element of the coupling ring; end_a lies on cross A
// (limbs 1,3), end_b on cross B (limbs 2,4).
struct SpringElement {
  SpringAnchor end_a;
  SpringAnchor end_b;
  double rest_length;
  double stiffness;
  double damping;
};

inline constexpr int kNumSprings = 8;

// The fixed ring topology: every anchor connects to the two cross-B anchors
// adjacent to it in the nominal pose (crosses concentric, mutually rotated
// pi/4), so each of the eight anchors has degree two.
std::array<SpringElement, kNumSprings> spring_elements(const ModelParams& p);

// Nominal relative angle of limb i (0-based) w.r.t. limb 1: -i*pi/4.
double nominal_offset(int limb);

Vec2 limb_center(const GeneralizedState& s, int limb);
Vec2 limb_center_velocity(const GeneralizedState& s, int limb);

// Unit vector from the upper-body pin toward the link tip: (cos t5, sin t5).
// Zero angle points along forward horizontal; positive raises the link.
inline Vec2 upper_body_axis(double theta5) {
  return Vec2(std::cos(theta5), std::sin(theta5));
}

Vec2 tip_position(const GeneralizedState& s, const ModelParams& p, Foot f);
Vec2 tip_velocity(const GeneralizedState& s, const ModelParams& p, Foot f);

// All eight tips indexed by Foot order.  Throws std::invalid_argument when
// state dimensions do not match the variant.
std::array<Vec2, kNumFeet> tip_positions(const GeneralizedState& s,
                                         const ModelParams& p);

Vec2 anchor_position(const GeneralizedState& s, const ModelParams& p,
                     const SpringAnchor& anchor);
Vec2 anchor_velocity(const GeneralizedState& s, const ModelParams& p,
                     const SpringAnchor& anchor);

// Instantaneous element geometry.
struct SpringState {
  double length;  // |p_b - p_a|
  double rate;    // d length / dt
  Vec2 unit;      // (p_b - p_a) / length
  Vec2 p_a;
  Vec2 p_b;
};

// Throws SingularGeometryError when an element collapses to a point.
std::array<SpringState, kNumSprings> spring_geometry(const GeneralizedState& s,
                                                     const ModelParams& p);

// Validates q/qd sizes against the variant.
void check_state(const GeneralizedState& s, const ModelParams& p);

}  // namespace vcrw

#endif  // VCRW_MODEL_H_
