#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <string>
#include <utility>
#include <vector>

#include "hgr/finger_motion.hpp"
#include "hgr/global_motion.hpp"
#include "hgr/skeleton.hpp"

namespace hgr {

/// Rest hand used by forward kinematics: the reference palm plus three bone
/// lengths per finger (proximal, middle, distal), fingers straight along
/// their rest directions.
struct HandTemplate {
  JointLayout layout;
  ReferencePalm palm = ReferencePalm::standard();
  std::array<std::array<double, 3>, kFingerCount> bone_lengths{{
      {0.035, 0.030, 0.025},
      {0.040, 0.025, 0.020},
      {0.045, 0.028, 0.022},
      {0.042, 0.026, 0.020},
      {0.033, 0.020, 0.018},
  }};

  static HandTemplate standard() { return {}; }
  HandTemplate scaled(double factor) const;
  std::vector<Vec3> rest_pose() const;
};

/// Global pose as Euler angles (same convention as global_motion) plus a
/// translation; world = R * local + translation.
struct RigidPose {
  Vec3 rotation = Vec3::Zero();
  Vec3 translation = Vec3::Zero();
};

HandSkeleton forward_kinematics(const HandTemplate& hand, const RigidPose& pose,
                                const FingerAngles& angles,
                                EulerConvention convention = EulerConvention::XYZ);

/// Piecewise-linear curve over normalized time u in [0, 1]; constant outside
/// the control points, zero when empty.
struct Curve {
  std::vector<std::pair<double, double>> points;
  double at(double u) const;
};

inline constexpr int kPoseCurves = 6;  // rx ry rz tx ty tz

struct GestureScript {
  std::string name;
  int gesture = 1;
  int finger = 1;
  int min_frames = 30;
  int max_frames = 45;
  std::array<Curve, kPoseCurves> pose;
  std::array<Curve, kFingerDofs> angles;
};

/// Text format: sections introduced by `[script]`, then `key = value`
/// lines. Keys: name, gesture, finger, frames (min max), rx ry rz tx ty tz,
/// and `<finger>.<dof>` with finger in {thumb,index,middle,ring,pinky,all}
/// and dof in {mcp_flex,mcp_abd,pip,dip,flex}; `flex` sets all three
/// flexions. Curve values are `u:value` pairs.
std::vector<GestureScript> parse_scripts(std::istream& in);

/// Six archetypes: grab, tap, pinch, rotation, swipe and shake.
std::vector<GestureScript> builtin_scripts();
const std::string& builtin_script_text();

struct SynthOptions {
  int subjects = 4;
  int trials = 5;
  std::uint64_t seed = 1;
  int finger_configs = 1;          // 2 adds a one-finger variant of every script
  double noise_sigma = 0.001;      // meters, iid per coordinate
  double amplitude_jitter = 0.15;  // per-subject scale in [1 - j, 1 + j]
  double speed_jitter = 0.2;
  double hand_size_jitter = 0.1;
  double position_spread = 0.01;   // meters, per-subject base position
  double orientation_spread = 0.1; // radians, per-subject base orientation
  EulerConvention euler = EulerConvention::XYZ;
};

/// Deterministic given (scripts, options). Ordered by (script, finger,
/// subject, trial).
std::vector<SkeletonSequence> generate_dataset(const std::vector<GestureScript>& scripts,
                                               const SynthOptions& options,
                                               const HandTemplate& hand = HandTemplate::standard());

/// Writes gesture_<g>/finger_<f>/subject_<s>/essai_<t>/skeletons_world.txt
/// with 9 significant digits.
void export_dhg_tree(const std::vector<SkeletonSequence>& sequences,
                     const std::filesystem::path& root);

}  // namespace hgr
