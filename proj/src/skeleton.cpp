#include "hgr/skeleton.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hgr/error.hpp"

namespace hgr {

void JointLayout::validate() const {
  if (joint_count < kPalmPointCount) {
    throw Error(Errc::InvalidLayout, "joint_count too small", joint_count);
  }
  std::vector<int> used;
  used.reserve(2 + 4 * kFingerCount);
  used.push_back(wrist);
  used.push_back(palm);
  for (const auto& f : fingers) {
    used.insert(used.end(), {f.base, f.pip, f.dip, f.tip});
  }
  for (int idx : used) {
    if (idx < 0 || idx >= joint_count) {
      throw Error(Errc::InvalidLayout, "joint index out of range: " + std::to_string(idx), idx);
    }
  }
  std::sort(used.begin(), used.end());
  if (std::adjacent_find(used.begin(), used.end()) != used.end()) {
    throw Error(Errc::InvalidLayout, "duplicate joint index");
  }
}

std::array<int, kPalmPointCount> JointLayout::palm_joints() const {
  return {wrist, palm, fingers[0].base, fingers[1].base, fingers[2].base, fingers[3].base,
          fingers[4].base};
}

int GestureLabel::gesture_28() const {
  if (gesture_14 < 1 || gesture_14 > 14 || finger_config < 1 || finger_config > 2) {
    throw Error(Errc::LabelOutOfRange, "gesture/finger outside 1..14 / 1..2", gesture_14,
                finger_config);
  }
  return 2 * (gesture_14 - 1) + finger_config;
}

GestureLabel GestureLabel::from_28(int label_28) {
  if (label_28 < 1 || label_28 > 28) {
    throw Error(Errc::OutOfRange, "28-class label outside 1..28", label_28);
  }
  return {(label_28 + 1) / 2, 2 - label_28 % 2};
}

const SkeletonSequence& validate_sequence(const SkeletonSequence& seq, const JointLayout& layout) {
  for (std::size_t t = 0; t < seq.frames.size(); ++t) {
    const auto& joints = seq.frames[t].joints;
    const int frame = static_cast<int>(t);
    if (static_cast<int>(joints.size()) != layout.joint_count) {
      throw Error(Errc::WrongJointCount,
                  "frame " + std::to_string(frame) + " has " + std::to_string(joints.size()) +
                      " joints",
                  frame, static_cast<int>(joints.size()));
    }
    for (std::size_t j = 0; j < joints.size(); ++j) {
      if (!joints[j].allFinite()) {
        throw Error(Errc::NonFiniteCoordinate,
                    "frame " + std::to_string(frame) + " joint " + std::to_string(j), frame,
                    static_cast<int>(j));
      }
    }
  }
  return seq;
}

double palm_radius(const HandSkeleton& frame, const JointLayout& layout) {
  const Vec3& palm = frame.joints.at(layout.palm);
  double sum = 0.0;
  for (const auto& f : layout.fingers) {
    sum += (frame.joints.at(f.base) - palm).norm();
  }
  if (sum == 0.0) {
    throw Error(Errc::DegeneratePalm, "all finger bases coincide with the palm joint");
  }
  return sum / kFingerCount;
}

FeatureMatrix normalize_skeleton_branch(const SkeletonSequence& seq, const JointLayout& layout) {
  const auto frames = static_cast<Eigen::Index>(seq.frames.size());
  const int joints = layout.joint_count;
  FeatureMatrix out(frames, 3 * joints);
  if (frames == 0) {
    return out;
  }
  const Vec3 origin = seq.frames.front().joints.at(layout.palm);
  double amplitude = 0.0;
  for (Eigen::Index t = 0; t < frames; ++t) {
    const auto& frame = seq.frames[static_cast<std::size_t>(t)].joints;
    for (int j = 0; j < joints; ++j) {
      const Vec3 p = frame[static_cast<std::size_t>(j)] - origin;
      out.block<1, 3>(t, 3 * j) = p.transpose();
      amplitude = std::max(amplitude, p.norm());
    }
  }
  if (amplitude == 0.0) {
    throw Error(Errc::ZeroAmplitude, "every joint coincides with the first-frame palm");
  }
  out /= amplitude;
  return out;
}

}  // namespace hgr
