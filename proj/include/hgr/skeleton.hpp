#pragma once

#include <array>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace hgr {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Per-frame feature rows: one row per frame, one column per feature dim.
using FeatureMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline constexpr int kFingerCount = 5;
inline constexpr int kPalmPointCount = 7;  // wrist, palm, 5 finger bases

enum class Finger { Thumb = 0, Index, Middle, Ring, Pinky };

struct FingerJoints {
  int base;  // MCP
  int pip;
  int dip;
  int tip;
};

/// Joint index map. The default is the 22-joint DHG skeleton: wrist, palm,
/// then base/PIP/DIP/tip for thumb, index, middle, ring and pinky.
struct JointLayout {
  int joint_count = 22;
  int wrist = 0;
  int palm = 1;
  std::array<FingerJoints, kFingerCount> fingers{{
      {2, 3, 4, 5},
      {6, 7, 8, 9},
      {10, 11, 12, 13},
      {14, 15, 16, 17},
      {18, 19, 20, 21},
  }};

  static JointLayout dhg() { return {}; }

  /// Throws Errc::InvalidLayout when indices collide or fall out of range.
  void validate() const;

  /// Wrist, palm and the five finger bases, in that order.
  std::array<int, kPalmPointCount> palm_joints() const;
};

struct HandSkeleton {
  std::vector<Vec3> joints;
};

struct SequenceInfo {
  int subject = 0;
  int gesture = 0;
  int finger = 0;
  int trial = 0;
};

struct SkeletonSequence {
  std::vector<HandSkeleton> frames;
  SequenceInfo info;
};

/// 14-gesture id plus finger configuration; the 28-class label is
/// 2 * (gesture_14 - 1) + finger_config.
struct GestureLabel {
  int gesture_14 = 1;
  int finger_config = 1;

  int gesture_28() const;
  static GestureLabel from_28(int label_28);
};

/// Returns `seq` unchanged when every frame has exactly `layout.joint_count`
/// finite joints. Throws WrongJointCount(frame, found) or
/// NonFiniteCoordinate(frame, joint) for the first offending frame.
const SkeletonSequence& validate_sequence(const SkeletonSequence& seq, const JointLayout& layout);

/// Mean distance from the palm joint to the five finger bases.
double palm_radius(const HandSkeleton& frame, const JointLayout& layout);

/// Skeleton-branch input: subtract the first-frame palm position, divide by
/// the largest joint norm over the sequence, flatten to T x 3J.
FeatureMatrix normalize_skeleton_branch(const SkeletonSequence& seq, const JointLayout& layout);

}  // namespace hgr
