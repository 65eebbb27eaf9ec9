#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hgr/features.hpp"

namespace hgr {

/// One feature stream of one sequence. On disk: a text header
///
///   hgr-features 1
///   kind <global|finger|skeleton>
///   gesture <g>
///   finger <f>
///   subject <s>
///   trial <t>
///   frames <T>
///   dims <D>
///   end
///
/// followed by T x D little-endian doubles, frame-major.
struct FeatureFile {
  FeatureKind kind = FeatureKind::Global;
  SequenceInfo info;
  FeatureMatrix values;
};

void write_feature_file(const FeatureFile& file, std::ostream& out);
void write_feature_file(const FeatureFile& file, const std::filesystem::path& path);

/// Throws FormatError on malformed input, IoError when unreadable.
FeatureFile read_feature_file(std::istream& in);
FeatureFile read_feature_file(const std::filesystem::path& path);

/// `g<gg>_f<f>_s<ss>_t<tt>.<kind>.feat`
std::string feature_file_name(FeatureKind kind, const SequenceInfo& info);

/// Writes every stream of every sequence listed in `kinds` into `dir`.
/// Returns the number of files written.
std::size_t write_feature_dir(const std::vector<FeatureStreams>& features,
                              const std::vector<FeatureKind>& kinds,
                              const std::filesystem::path& dir);

/// Reads all `*.feat` files under `dir` and groups them per sequence, sorted
/// by (gesture, finger, subject, trial). Every sequence must have all three
/// kinds with a common frame count (FormatError otherwise). When
/// `expected_dims` is given, per-kind dims must match (ShapeMismatch).
std::vector<FeatureStreams> read_feature_dir(
    const std::filesystem::path& dir,
    const std::optional<std::array<int, kBranchCount>>& expected_dims = std::nullopt);

}  // namespace hgr
