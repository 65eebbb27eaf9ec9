#include <doctest.h>

#include <fstream>
#include <set>

#include "helpers.hpp"
#include "hgr/dataset.hpp"
#include "hgr/error.hpp"

using namespace hgr;
namespace fs = std::filesystem;

namespace {

void write_frames(const fs::path& file, int frames, int values_per_line = 66) {
  fs::create_directories(file.parent_path());
  std::ofstream out(file);
  for (int t = 0; t < frames; ++t) {
    for (int v = 0; v < values_per_line; ++v) {
      out << (v == 0 ? "" : " ") << 0.001 * (t + v);
    }
    out << '\n';
  }
}

fs::path entry_file(const fs::path& root, int g, int f, int s, int t) {
  return root / ("gesture_" + std::to_string(g)) / ("finger_" + std::to_string(f)) /
         ("subject_" + std::to_string(s)) / ("essai_" + std::to_string(t)) / "skeletons_world.txt";
}

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an hgr::Error");
  return Errc::IoError;
}

}  // namespace

TEST_CASE("scan_dataset errors on missing or empty roots") {
  testing::TempDir dir("scan");
  CHECK(code_of([&] { scan_dataset(dir.path() / "absent"); }) == Errc::MissingRoot);
  CHECK(code_of([&] { scan_dataset(dir.path()); }) == Errc::EmptyDataset);
}

TEST_CASE("scan_dataset finds every trial, skips missing ones, and sorts") {
  testing::TempDir dir("scan");
  int written = 0;
  for (int g : {3, 1}) {
    for (int f : {2, 1}) {
      for (int s : {2, 1}) {
        for (int t : {1, 2}) {
          if (g == 3 && f == 2 && s == 1 && t == 2) {
            continue;  // missing trial
          }
          write_frames(entry_file(dir.path(), g, f, s, t), 2);
          ++written;
        }
      }
    }
  }
  fs::create_directories(dir.path() / "gesture_x" / "finger_1");
  fs::create_directories(dir.path() / "notes");
  const auto index = scan_dataset(dir.path());
  CHECK(index.entries.size() == static_cast<std::size_t>(written));
  CHECK(written == 15);
  for (std::size_t i = 1; i < index.entries.size(); ++i) {
    const auto& a = index.entries[i - 1];
    const auto& b = index.entries[i];
    CHECK(std::tie(a.gesture, a.finger, a.subject, a.trial) <
          std::tie(b.gesture, b.finger, b.subject, b.trial));
  }
  CHECK(index.entries.front().gesture == 1);
  CHECK(index.entries.back().gesture == 3);
}

TEST_CASE("load_sequence reads one frame per line") {
  testing::TempDir dir("load");
  const auto file = entry_file(dir.path(), 2, 1, 4, 3);
  write_frames(file, 60);
  const auto seq = load_sequence({2, 1, 4, 3, file});
  CHECK(seq.frames.size() == 60);
  CHECK(seq.info.gesture == 2);
  CHECK(seq.info.subject == 4);
  CHECK(seq.info.trial == 3);
  CHECK(seq.frames[10].joints[1].x() == doctest::Approx(0.001 * (10 + 3)));
}

TEST_CASE("load_sequence accepts scientific notation, CRLF and blank lines") {
  testing::TempDir dir("load");
  const auto file = dir.path() / "s.txt";
  {
    std::ofstream out(file, std::ios::binary);
    for (int line = 0; line < 2; ++line) {
      for (int v = 0; v < 66; ++v) {
        out << (v ? "\t" : "") << "1.5e-2";
      }
      out << "\r\n\r\n";
    }
  }
  const auto seq = load_sequence({1, 1, 1, 1, file});
  REQUIRE(seq.frames.size() == 2);
  CHECK(seq.frames[1].joints[21].z() == doctest::Approx(0.015));
}

TEST_CASE("load_sequence rejects short lines and junk") {
  testing::TempDir dir("load");
  const auto short_file = dir.path() / "short.txt";
  write_frames(short_file, 1);
  {
    std::ofstream out(short_file, std::ios::app);
    for (int v = 0; v < 65; ++v) {
      out << "0.1 ";
    }
    out << '\n';
  }
  try {
    load_sequence({1, 1, 1, 1, short_file});
    FAIL("expected WrongJointCount");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::WrongJointCount);
    CHECK(e.where() == 2);
    CHECK(e.detail() == 65);
  }
  const auto junk = dir.path() / "junk.txt";
  {
    std::ofstream out(junk);
    out << "0.1 abc 0.3\n";
  }
  try {
    load_sequence({1, 1, 1, 1, junk});
    FAIL("expected ParseError");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::ParseError);
    CHECK(e.where() == 1);
  }
}

TEST_CASE("LOOCV splits hold out exactly one subject and partition the index") {
  std::vector<SkeletonSequence> seqs;
  for (int g = 1; g <= 3; ++g) {
    for (int s = 1; s <= 4; ++s) {
      for (int t = 1; t <= 2; ++t) {
        SkeletonSequence q;
        q.info = {s, g, 1, t};
        seqs.push_back(q);
      }
    }
  }
  const auto index = index_from_sequences(seqs);
  const auto splits = make_loocv_splits(index);
  REQUIRE(splits.size() == 4);
  for (const auto& split : splits) {
    CHECK(split.test.size() == 6);
    std::set<std::size_t> all(split.train.begin(), split.train.end());
    for (std::size_t i : split.test) {
      CHECK(index.entries[i].subject == split.held_out_subject);
      CHECK(all.insert(i).second);
    }
    for (std::size_t i : split.train) {
      CHECK(index.entries[i].subject != split.held_out_subject);
    }
    CHECK(all.size() == index.entries.size());
  }
}

TEST_CASE("LOOCV reports a missing subject") {
  std::vector<SkeletonSequence> seqs;
  for (int s = 1; s <= 8; ++s) {
    if (s == 7) {
      continue;
    }
    SkeletonSequence q;
    q.info = {s, 1, 1, 1};
    seqs.push_back(q);
  }
  const auto index = index_from_sequences(seqs);
  try {
    make_loocv_splits(index);
    FAIL("expected MissingSubject");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::MissingSubject);
    CHECK(e.where() == 7);
  }
  CHECK(make_loocv_splits(index, 6).size() == 6);
}

TEST_CASE("index_from_sequences rejects duplicate keys") {
  std::vector<SkeletonSequence> seqs(2);
  seqs[0].info = seqs[1].info = {1, 2, 1, 1};
  CHECK_THROWS_AS(index_from_sequences(seqs), Error);
}
