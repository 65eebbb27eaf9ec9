#include "hgr/features.hpp"

#include <exception>

#include "hgr/error.hpp"

namespace hgr {

const char* to_string(FeatureKind kind) noexcept {
  switch (kind) {
    case FeatureKind::Global: return "global";
    case FeatureKind::Finger: return "finger";
    case FeatureKind::Skeleton: return "skeleton";
  }
  return "unknown";
}

FeatureKind feature_kind_from_string(const std::string& name) {
  if (name == "global") return FeatureKind::Global;
  if (name == "finger") return FeatureKind::Finger;
  if (name == "skeleton") return FeatureKind::Skeleton;
  throw Error(Errc::InvalidConfig, "unknown feature kind '" + name + "'");
}

std::array<int, kBranchCount> FeatureOptions::dims() const {
  return {global_feature_dims(global), finger_feature_dims(global.lags.size()),
          3 * layout.joint_count};
}

FeatureStreams extract_streams(const SkeletonSequence& seq, const FeatureOptions& options) {
  validate_sequence(seq, options.layout);
  if (seq.frames.empty()) {
    throw Error(Errc::EmptyDataset, "sequence has no frames");
  }
  FeatureStreams out;
  out.info = seq.info;
  out.streams[0] = global_features(seq, options.layout, options.reference, options.global);
  out.streams[1] = finger_features(seq, options.layout, options.reference, options.global.lags);
  out.streams[2] = normalize_skeleton_branch(seq, options.layout);
  return out;
}

std::vector<FeatureStreams> extract_all(const std::vector<SkeletonSequence>& sequences,
                                        const FeatureOptions& options) {
  const auto n = static_cast<std::ptrdiff_t>(sequences.size());
  std::vector<FeatureStreams> out(sequences.size());
  std::vector<std::exception_ptr> errors(sequences.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    try {
      out[k] = extract_streams(sequences[k], options);
    } catch (...) {
      errors[k] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) {
      std::rethrow_exception(e);
    }
  }
  return out;
}

std::vector<FeatureStreams> extract_all_serial(const std::vector<SkeletonSequence>& sequences,
                                               const FeatureOptions& options) {
  std::vector<FeatureStreams> out;
  out.reserve(sequences.size());
  for (const auto& seq : sequences) {
    out.push_back(extract_streams(seq, options));
  }
  return out;
}

}  // namespace hgr
