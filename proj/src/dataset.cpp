#include "hgr/dataset.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <tuple>

#include "hgr/error.hpp"

namespace hgr {

namespace fs = std::filesystem;

namespace {

/// Parses "<prefix><positive int>"; returns 0 when the name does not match.
int parse_numbered(const std::string& name, const std::string& prefix) {
  if (name.size() <= prefix.size() || name.compare(0, prefix.size(), prefix) != 0) {
    return 0;
  }
  int value = 0;
  for (std::size_t i = prefix.size(); i < name.size(); ++i) {
    const char c = name[i];
    if (c < '0' || c > '9') {
      return 0;
    }
    value = value * 10 + (c - '0');
    if (value > 1'000'000) {
      return 0;
    }
  }
  return value;
}

std::vector<std::pair<int, fs::path>> numbered_children(const fs::path& dir,
                                                        const std::string& prefix) {
  std::vector<std::pair<int, fs::path>> out;
  std::error_code ec;
  for (const auto& item : fs::directory_iterator(dir, ec)) {
    if (!item.is_directory()) {
      continue;
    }
    const int id = parse_numbered(item.path().filename().string(), prefix);
    if (id > 0) {
      out.emplace_back(id, item.path());
    }
  }
  return out;
}

auto entry_key(const DatasetEntry& e) { return std::tie(e.gesture, e.finger, e.subject, e.trial); }

}  // namespace

DatasetIndex scan_dataset(const fs::path& root) {
  if (!fs::is_directory(root)) {
    throw Error(Errc::MissingRoot, "dataset root not found: " + root.string());
  }
  DatasetIndex index;
  for (const auto& [g, gdir] : numbered_children(root, "gesture_")) {
    for (const auto& [f, fdir] : numbered_children(gdir, "finger_")) {
      for (const auto& [s, sdir] : numbered_children(fdir, "subject_")) {
        for (const auto& [t, tdir] : numbered_children(sdir, "essai_")) {
          const fs::path file = tdir / "skeletons_world.txt";
          if (fs::is_regular_file(file)) {
            index.entries.push_back({g, f, s, t, file});
          }
        }
      }
    }
  }
  if (index.entries.empty()) {
    throw Error(Errc::EmptyDataset, "no skeleton files under " + root.string());
  }
  std::sort(index.entries.begin(), index.entries.end(),
            [](const auto& a, const auto& b) { return entry_key(a) < entry_key(b); });
  return index;
}

DatasetIndex index_from_sequences(const std::vector<SkeletonSequence>& sequences) {
  DatasetIndex index;
  index.entries.reserve(sequences.size());
  std::set<std::tuple<int, int, int, int>> seen;
  for (const auto& seq : sequences) {
    const auto& i = seq.info;
    if (!seen.emplace(i.gesture, i.finger, i.subject, i.trial).second) {
      throw Error(Errc::InvalidConfig, "duplicate (gesture, finger, subject, trial) key");
    }
    index.entries.push_back({i.gesture, i.finger, i.subject, i.trial, {}});
  }
  return index;
}

SkeletonSequence load_sequence(const DatasetEntry& entry, const JointLayout& layout) {
  std::ifstream in(entry.path);
  if (!in) {
    throw Error(Errc::IoError, "cannot open " + entry.path.string());
  }
  SkeletonSequence seq;
  seq.info = {entry.subject, entry.gesture, entry.finger, entry.trial};

  const std::size_t expected = 3 * static_cast<std::size_t>(layout.joint_count);
  std::vector<double> values;
  values.reserve(expected);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    values.clear();
    const char* p = line.c_str();
    for (;;) {
      while (*p == ' ' || *p == '\t') {
        ++p;
      }
      if (*p == '\0') {
        break;
      }
      char* end = nullptr;
      errno = 0;
      const double v = std::strtod(p, &end);
      if (end == p || (*end != '\0' && *end != ' ' && *end != '\t') || errno == ERANGE) {
        throw Error(Errc::ParseError,
                    entry.path.string() + ": malformed number on line " + std::to_string(line_no),
                    line_no);
      }
      values.push_back(v);
      p = end;
    }
    if (values.empty()) {
      continue;  // blank line
    }
    if (values.size() != expected) {
      throw Error(Errc::WrongJointCount,
                  entry.path.string() + ": line " + std::to_string(line_no) + " has " +
                      std::to_string(values.size()) + " values, expected " +
                      std::to_string(expected),
                  line_no, static_cast<int>(values.size()));
    }
    HandSkeleton frame;
    frame.joints.resize(static_cast<std::size_t>(layout.joint_count));
    for (std::size_t j = 0; j < frame.joints.size(); ++j) {
      frame.joints[j] = Vec3(values[3 * j], values[3 * j + 1], values[3 * j + 2]);
    }
    seq.frames.push_back(std::move(frame));
  }
  return seq;
}

std::vector<LoocvSplit> make_loocv_splits(const DatasetIndex& index,
                                          std::optional<int> subject_count) {
  std::map<int, std::vector<std::size_t>> by_subject;
  int max_subject = 0;
  for (std::size_t i = 0; i < index.entries.size(); ++i) {
    const int s = index.entries[i].subject;
    by_subject[s].push_back(i);
    max_subject = std::max(max_subject, s);
  }
  const int count = subject_count.value_or(max_subject);
  std::vector<LoocvSplit> splits;
  splits.reserve(static_cast<std::size_t>(std::max(count, 0)));
  for (int s = 1; s <= count; ++s) {
    auto it = by_subject.find(s);
    if (it == by_subject.end()) {
      throw Error(Errc::MissingSubject, "no entries for subject " + std::to_string(s), s);
    }
    LoocvSplit split;
    split.held_out_subject = s;
    split.test = it->second;
    for (std::size_t i = 0; i < index.entries.size(); ++i) {
      if (index.entries[i].subject != s) {
        split.train.push_back(i);
      }
    }
    splits.push_back(std::move(split));
  }
  return splits;
}

}  // namespace hgr
