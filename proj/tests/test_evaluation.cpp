#include <doctest.h>

#include <algorithm>
#include <random>

#include "hgr/error.hpp"
#include "hgr/evaluation.hpp"
#include "hgr/skeleton.hpp"

using namespace hgr;

TEST_CASE("category map defaults and validation") {
  GestureCategoryMap map;
  CHECK(map.matches(1, Category::Fine));
  CHECK(map.matches(2, Category::Coarse));
  CHECK(map.matches(2, Category::Both));
  CHECK(!map.matches(14, Category::Fine));
  map.fine.insert(15);
  CHECK_THROWS_AS(map.validate(), Error);
}

TEST_CASE("accuracy over categories") {
  const std::vector<int> labels{1, 1, 3, 3, 2, 7};
  const std::vector<int> all_right = labels;
  CHECK(accuracy(all_right, labels, Category::Both) == 1.0);
  const std::vector<int> half_fine{1, 2, 3, 4, 2, 7};
  CHECK(accuracy(half_fine, labels, Category::Fine) == 0.5);
  CHECK(accuracy(half_fine, labels, Category::Coarse) == 1.0);
  try {
    accuracy(std::vector<int>{1}, std::vector<int>{2}, Category::Fine);
    FAIL("expected EmptyFilter");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::EmptyFilter);
  }
  CHECK_THROWS_AS(accuracy(std::vector<int>{1, 2}, std::vector<int>{1}, Category::Both), Error);
}

TEST_CASE("both-accuracy is the count-weighted mean of fine and coarse") {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> g(1, 14);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<int> labels, preds;
    for (int i = 0; i < 40; ++i) {
      labels.push_back(g(rng));
      preds.push_back(rng() % 2 ? labels.back() : g(rng));
    }
    labels[0] = 1;
    labels[1] = 2;
    const GestureCategoryMap map;
    long n_fine = 0;
    for (int l : labels) n_fine += map.matches(l, Category::Fine) ? 1 : 0;
    const double n = static_cast<double>(labels.size());
    const double weighted = (n_fine * accuracy(preds, labels, Category::Fine) +
                             (n - n_fine) * accuracy(preds, labels, Category::Coarse)) /
                            n;
    CHECK(accuracy(preds, labels, Category::Both) == doctest::Approx(weighted).epsilon(1e-14));
  }
}

TEST_CASE("aggregate_splits") {
  const std::vector<double> flat{0.8, 0.8, 0.8};
  auto s = aggregate_splits(flat);
  CHECK(s.best == 0.8);
  CHECK(s.worst == 0.8);
  CHECK(s.avg == doctest::Approx(0.8));
  CHECK(s.std == doctest::Approx(0.0));
  s = aggregate_splits(std::vector<double>{0.6, 1.0});
  CHECK(s.best == 1.0);
  CHECK(s.worst == 0.6);
  CHECK(s.avg == doctest::Approx(0.8));
  CHECK(s.std == doctest::Approx(0.2));
  s = aggregate_splits(std::vector<double>{0.7});
  CHECK(s.best == 0.7);
  CHECK(s.std == 0.0);
  CHECK_THROWS_AS(aggregate_splits(std::vector<double>{}), Error);
}

TEST_CASE("28 to 14 collapse") {
  CHECK(collapse_28_to_14(1) == 1);
  CHECK(collapse_28_to_14(2) == 1);
  CHECK(collapse_28_to_14(28) == 14);
  for (int l = 1; l <= 28; ++l) {
    CHECK(collapse_28_to_14(l) == GestureLabel::from_28(l).gesture_14);
  }
  try {
    collapse_28_to_14(29);
    FAIL("expected OutOfRange");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::OutOfRange);
  }
  CHECK_THROWS_AS(collapse_28_to_14(0), Error);
}

TEST_CASE("confusion matrix invariants on random predictions") {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> cls(1, 14);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<int> labels, preds;
    const int n = 1 + static_cast<int>(rng() % 60);
    for (int i = 0; i < n; ++i) {
      labels.push_back(cls(rng));
      preds.push_back(rng() % 3 ? labels.back() : cls(rng));
    }
    ConfusionMatrix cm(14);
    cm.add(labels, preds);
    CHECK(cm.total() == n);
    CHECK(cm.accuracy() == doctest::Approx(accuracy(preds, labels, Category::Both)));
    for (int c = 1; c <= 14; ++c) {
      CHECK(cm.row_sum(c) == std::count(labels.begin(), labels.end(), c));
    }
  }
  ConfusionMatrix cm(3);
  CHECK_THROWS_AS(cm.add(4, 1), Error);
  CHECK_THROWS_AS(cm.accuracy(), Error);
  cm.add(1, 2);
  ConfusionMatrix other(3);
  other.add(1, 2);
  cm += other;
  CHECK(cm.at(1, 2) == 2);
  CHECK_THROWS_AS(cm += ConfusionMatrix(4), Error);
}

TEST_CASE("LARFD") {
  std::vector<int> labels;
  for (int l = 1; l <= 28; ++l) labels.push_back(l);
  CHECK(larfd(labels, labels) == 0.0);
  std::vector<int> swapped;
  for (int l : labels) swapped.push_back(l % 2 ? l + 1 : l - 1);
  CHECK(larfd(swapped, labels) == 1.0);
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> cls(1, 28);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<int> preds;
    for (int l : labels) preds.push_back(rng() % 2 ? l : cls(rng));
    CHECK(larfd(preds, labels) >= 0.0);
  }
}

TEST_CASE("reports aggregate split results") {
  const GestureCategoryMap map;
  std::vector<SplitResult> splits;
  splits.push_back(score_split(1, {1, 2, 7, 7}, {1, 2, 7, 8}, map, 14));
  splits.push_back(score_split(2, {2, 2}, {2, 7}, map, 14));
  CHECK(splits[0].fine == 1.0);
  CHECK(splits[0].coarse == doctest::Approx(2.0 / 3));
  CHECK(!splits[1].fine.has_value());
  const auto report = make_report(splits, 14);
  REQUIRE(report.fine.has_value());
  CHECK(report.fine->avg == 1.0);
  CHECK(report.both.best == 0.75);
  CHECK(report.both.worst == 0.5);
  CHECK(report.both.worst <= report.both.avg);
  CHECK(report.both.avg <= report.both.best);
  CHECK(report.confusion.total() == 6);
  CHECK(!report.larfd.has_value());

  const auto r28 = make_report({score_split(1, {1, 2, 4}, {2, 2, 3}, map, 28)}, 28);
  REQUIRE(r28.larfd.has_value());
  CHECK(*r28.larfd == doctest::Approx(2.0 / 3));
  CHECK_THROWS_AS(make_report({}, 14), Error);
}
