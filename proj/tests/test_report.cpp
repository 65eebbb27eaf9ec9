#include <doctest.h>

#include <fstream>
#include <sstream>

#include "helpers.hpp"
#include "hgr/error.hpp"
#include "hgr/report.hpp"

using namespace hgr;

namespace {

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    out.push_back(line);
  }
  return out;
}

std::vector<std::string> cells(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) {
    out.push_back(cell);
  }
  if (!line.empty() && line.back() == ',') {
    out.emplace_back();
  }
  return out;
}

EvaluationReport sample_report(int classes) {
  const GestureCategoryMap map;
  if (classes == 28) {
    return make_report({score_split(1, {1, 4, 27}, {2, 4, 27}, map, 28),
                        score_split(2, {13, 14}, {13, 13}, map, 28)},
                       28);
  }
  return make_report({score_split(1, {1, 2, 7, 7}, {1, 2, 7, 8}, map, 14),
                      score_split(2, {2, 2}, {2, 7}, map, 14)},
                     14);
}

}  // namespace

TEST_CASE("class names") {
  CHECK(gesture_name(1) == "Grab");
  CHECK(gesture_name(14) == "Shake");
  CHECK_THROWS_AS(gesture_name(0), Error);
  const auto n14 = class_names(14);
  CHECK(n14.size() == 14);
  CHECK(n14[6] == "Swipe Right");
  const auto n28 = class_names(28);
  CHECK(n28.size() == 28);
  CHECK(n28[0] == "Grab_f1");
  CHECK(n28[1] == "Grab_f2");
  CHECK(n28[27] == "Shake_f2");
}

TEST_CASE("summary CSV") {
  std::ostringstream out;
  write_summary_csv(sample_report(14), out);
  const auto rows = lines(out.str());
  REQUIRE(rows.size() == 4);
  CHECK(rows[0] == "category,best,worst,avg,std");
  CHECK(rows[1] == "fine,1.000000,1.000000,1.000000,0.000000");
  CHECK(rows[3] == "both,0.750000,0.500000,0.625000,0.125000");

  std::ostringstream out28;
  write_summary_csv(sample_report(28), out28);
  const auto rows28 = lines(out28.str());
  REQUIRE(rows28.size() == 5);
  CHECK(rows28[4].rfind("larfd,", 0) == 0);
  CHECK(cells(rows28[4]).size() == 5);
}

TEST_CASE("splits CSV leaves absent categories empty") {
  std::ostringstream out;
  write_splits_csv(sample_report(14), out);
  const auto rows = lines(out.str());
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] == "subject,test_count,fine,coarse,both");
  CHECK(rows[1] == "1,4,1.000000,0.666667,0.750000");
  CHECK(rows[2] == "2,2,,0.500000,0.500000");
}

TEST_CASE("confusion CSV rows sum to per-class counts") {
  const auto report = sample_report(28);
  std::ostringstream out;
  write_confusion_csv(report.confusion, out);
  const auto rows = lines(out.str());
  REQUIRE(rows.size() == 29);
  CHECK(cells(rows[0]).size() == 29);
  CHECK(rows[0].rfind("truth\\predicted,Grab_f1,Grab_f2", 0) == 0);
  long total = 0;
  for (int t = 1; t <= 28; ++t) {
    const auto c = cells(rows[static_cast<std::size_t>(t)]);
    REQUIRE(c.size() == 29);
    long sum = 0;
    for (std::size_t k = 1; k < c.size(); ++k) {
      sum += std::stol(c[k]);
    }
    CHECK(sum == report.confusion.row_sum(t));
    total += sum;
  }
  CHECK(total == 5);
}

TEST_CASE("text summary and report directory") {
  const auto report = sample_report(28);
  std::ostringstream out;
  write_summary_text(report, out);
  CHECK(out.str().find("overall accuracy: 60.00") != std::string::npos);
  CHECK(out.str().find("LARFD:") != std::string::npos);

  testing::TempDir dir("report");
  write_report(report, dir.path() / "nested");
  for (const char* name : {"summary.txt", "summary.csv", "splits.csv", "confusion.csv"}) {
    CHECK(std::filesystem::is_regular_file(dir.path() / "nested" / name));
  }
}
