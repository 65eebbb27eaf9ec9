#pragma once

#include <array>
#include <span>
#include <vector>

#include "hgr/global_motion.hpp"
#include "hgr/skeleton.hpp"

namespace hgr {

inline constexpr int kDofsPerFinger = 4;
inline constexpr int kFingerDofs = kFingerCount * kDofsPerFinger;

/// Joint angles in radians, finger-major (thumb..pinky); per finger:
/// MCP flexion, MCP abduction, PIP flexion, DIP flexion.
using FingerAngles = std::array<double, kFingerDofs>;

enum FingerDof { kMcpFlexion = 0, kMcpAbduction = 1, kPipFlexion = 2, kDipFlexion = 3 };

constexpr std::size_t dof_index(int finger, FingerDof dof) {
  return static_cast<std::size_t>(finger * kDofsPerFinger + dof);
}

/// Rest orientation of one finger in the hand-local frame. Columns
/// [lateral, forward, normal] form a proper rotation: flexion rotates
/// forward toward normal about lateral, abduction rotates about normal.
struct FingerFrame {
  Vec3 lateral;
  Vec3 forward;
  Vec3 normal;

  Mat3 basis() const;
};

/// Rest frames derived from the reference palm: forward is the in-plane
/// direction from the palm joint to the finger base.
std::array<FingerFrame, kFingerCount> finger_rest_frames(const ReferencePalm& reference);

/// World-to-local transform: local = result.apply(world). Places the hand
/// onto the reference palm (centered at the origin, palm facing +z).
RigidTransform hand_local_frame(const HandSkeleton& frame, const JointLayout& layout,
                                const ReferencePalm& reference);

HandSkeleton transform_skeleton(const HandSkeleton& frame, const RigidTransform& transform);

/// Closed-form 20-DoF inverse kinematics in the hand-local frame. Only bone
/// directions are used. Throws ZeroLengthBone(finger, segment).
FingerAngles inverse_kinematics(const HandSkeleton& frame, const JointLayout& layout,
                                const ReferencePalm& reference);

/// Per-frame [theta, theta_op, theta_dp...]; 100 columns with default lags.
FeatureMatrix finger_features(const SkeletonSequence& seq, const JointLayout& layout,
                              const ReferencePalm& reference,
                              std::span<const int> lags = kDefaultLags);

int finger_feature_dims(std::size_t lag_count = kDefaultLags.size());

}  // namespace hgr
