#include "hgr/finger_motion.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hgr/error.hpp"
#include "hgr/temporal.hpp"

namespace hgr {

namespace {

constexpr double kMinBone = 1e-12;

Vec3 bone_direction(const Vec3& from, const Vec3& to, int finger, int segment) {
  const Vec3 d = to - from;
  const double len = d.norm();
  if (!(len > kMinBone)) {
    throw Error(Errc::ZeroLengthBone,
                "finger " + std::to_string(finger) + " segment " + std::to_string(segment), finger,
                segment);
  }
  return d / len;
}

/// Signed angle from a to b about axis (all unit, axis orthogonal to both).
double signed_angle(const Vec3& a, const Vec3& b, const Vec3& axis) {
  return std::atan2(axis.dot(a.cross(b)), a.dot(b));
}

}  // namespace

Mat3 FingerFrame::basis() const {
  Mat3 m;
  m.col(0) = lateral;
  m.col(1) = forward;
  m.col(2) = normal;
  return m;
}

std::array<FingerFrame, kFingerCount> finger_rest_frames(const ReferencePalm& reference) {
  const Vec3 n = reference.normal();
  const Vec3& palm = reference.points[1];
  std::array<FingerFrame, kFingerCount> frames;
  for (int f = 0; f < kFingerCount; ++f) {
    Vec3 fwd = reference.points[static_cast<std::size_t>(2 + f)] - palm;
    fwd -= n * n.dot(fwd);
    fwd.normalize();
    frames[static_cast<std::size_t>(f)] = {fwd.cross(n), fwd, n};
  }
  return frames;
}

RigidTransform hand_local_frame(const HandSkeleton& frame, const JointLayout& layout,
                                const ReferencePalm& reference) {
  std::array<Vec3, kPalmPointCount> pts;
  const auto idx = layout.palm_joints();
  for (std::size_t k = 0; k < idx.size(); ++k) {
    pts[k] = frame.joints.at(static_cast<std::size_t>(idx[k]));
  }
  return kabsch_align(pts, reference).inverse();
}

HandSkeleton transform_skeleton(const HandSkeleton& frame, const RigidTransform& transform) {
  HandSkeleton out;
  out.joints.reserve(frame.joints.size());
  for (const auto& p : frame.joints) {
    out.joints.push_back(transform.apply(p));
  }
  return out;
}

FingerAngles inverse_kinematics(const HandSkeleton& frame, const JointLayout& layout,
                                const ReferencePalm& reference) {
  const RigidTransform to_local = hand_local_frame(frame, layout, reference);
  const auto rest = finger_rest_frames(reference);
  FingerAngles angles{};
  for (int f = 0; f < kFingerCount; ++f) {
    const auto& fj = layout.fingers[static_cast<std::size_t>(f)];
    auto local = [&](int j) { return to_local.apply(frame.joints.at(static_cast<std::size_t>(j))); };
    const Vec3 base = local(fj.base);
    const Vec3 pip = local(fj.pip);
    const Vec3 dip = local(fj.dip);
    const Vec3 tip = local(fj.tip);
    const Vec3 u1 = bone_direction(base, pip, f, 0);
    const Vec3 u2 = bone_direction(pip, dip, f, 1);
    const Vec3 u3 = bone_direction(dip, tip, f, 2);

    // Proximal phalanx in finger coordinates: (-sin a cos b, cos a cos b, sin b).
    const FingerFrame& ff = rest[static_cast<std::size_t>(f)];
    const Vec3 v = ff.basis().transpose() * u1;
    const double flexion = std::asin(std::clamp(v.z(), -1.0, 1.0));
    const double abduction = std::atan2(-v.x(), v.y());
    // Abduction turns the lateral axis about the palm normal; flexions keep it.
    const Vec3 lateral =
        std::cos(abduction) * ff.lateral + std::sin(abduction) * ff.forward;

    angles[dof_index(f, kMcpFlexion)] = flexion;
    angles[dof_index(f, kMcpAbduction)] = abduction;
    angles[dof_index(f, kPipFlexion)] = signed_angle(u1, u2, lateral);
    angles[dof_index(f, kDipFlexion)] = signed_angle(u2, u3, lateral);
  }
  return angles;
}

int finger_feature_dims(std::size_t lag_count) {
  return kFingerDofs * static_cast<int>(2 + lag_count);
}

FeatureMatrix finger_features(const SkeletonSequence& seq, const JointLayout& layout,
                              const ReferencePalm& reference, std::span<const int> lags) {
  const auto frames = static_cast<Eigen::Index>(seq.frames.size());
  FeatureMatrix base(frames, kFingerDofs);
  for (Eigen::Index t = 0; t < frames; ++t) {
    FingerAngles a;
    try {
      a = inverse_kinematics(seq.frames[static_cast<std::size_t>(t)], layout, reference);
    } catch (const Error& e) {
      throw Error(e.code(), "frame " + std::to_string(t) + ": " + e.message(), static_cast<int>(t),
                  e.where());
    }
    for (int k = 0; k < kFingerDofs; ++k) {
      base(t, k) = a[static_cast<std::size_t>(k)];
    }
  }
  std::array<bool, kFingerDofs> angular;
  angular.fill(true);
  return temporal_pose_features(base, lags, angular);
}

}  // namespace hgr
