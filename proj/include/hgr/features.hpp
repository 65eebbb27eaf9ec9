#pragma once

#include <array>
#include <string>
#include <vector>

#include "hgr/finger_motion.hpp"
#include "hgr/global_motion.hpp"
#include "hgr/skeleton.hpp"

namespace hgr {

inline constexpr int kBranchCount = 3;

/// Input branches of the classifier, in parameter order.
enum class FeatureKind { Global = 0, Finger = 1, Skeleton = 2 };

const char* to_string(FeatureKind kind) noexcept;
/// Throws InvalidConfig for unknown names.
FeatureKind feature_kind_from_string(const std::string& name);

struct FeatureOptions {
  JointLayout layout;
  ReferencePalm reference = ReferencePalm::standard();
  GlobalMotionOptions global;  // global.lags is shared with the finger features

  std::array<int, kBranchCount> dims() const;
};

/// The three per-frame streams of one sequence, indexed by FeatureKind.
struct FeatureStreams {
  std::array<FeatureMatrix, kBranchCount> streams;
  SequenceInfo info;

  const FeatureMatrix& operator[](FeatureKind k) const {
    return streams[static_cast<std::size_t>(k)];
  }
};

/// Validates the sequence, then computes all three streams.
FeatureStreams extract_streams(const SkeletonSequence& seq, const FeatureOptions& options);

/// OpenMP over sequences. On failure rethrows the error of the lowest-index
/// failing sequence.
std::vector<FeatureStreams> extract_all(const std::vector<SkeletonSequence>& sequences,
                                        const FeatureOptions& options);

/// Single-threaded reference for extract_all.
std::vector<FeatureStreams> extract_all_serial(const std::vector<SkeletonSequence>& sequences,
                                               const FeatureOptions& options);

}  // namespace hgr
