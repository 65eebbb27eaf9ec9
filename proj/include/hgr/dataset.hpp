#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "hgr/skeleton.hpp"

namespace hgr {

struct DatasetEntry {
  int gesture = 0;
  int finger = 0;
  int subject = 0;
  int trial = 0;
  std::filesystem::path path;
};

struct DatasetIndex {
  std::vector<DatasetEntry> entries;  // sorted by (gesture, finger, subject, trial)
};

/// Discovers `gesture_<g>/finger_<f>/subject_<s>/essai_<t>/skeletons_world.txt`
/// under `root`. Missing trials are skipped silently.
DatasetIndex scan_dataset(const std::filesystem::path& root);

/// Builds an index (with empty paths) from in-memory sequence metadata.
/// Throws InvalidConfig on duplicate keys.
DatasetIndex index_from_sequences(const std::vector<SkeletonSequence>& sequences);

/// One frame per line, 3J whitespace-separated decimals.
SkeletonSequence load_sequence(const DatasetEntry& entry, const JointLayout& layout = {});

struct LoocvSplit {
  int held_out_subject = 0;
  std::vector<std::size_t> train;  // indices into DatasetIndex::entries
  std::vector<std::size_t> test;
};

/// One split per subject in 1..subject_count (default: the largest subject
/// id present). Throws MissingSubject(s) when some subject has no entries.
std::vector<LoocvSplit> make_loocv_splits(const DatasetIndex& index,
                                          std::optional<int> subject_count = std::nullopt);

}  // namespace hgr
