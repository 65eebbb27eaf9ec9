#pragma once

#include <optional>
#include <set>
#include <span>
#include <vector>

namespace hgr {

enum class Category { Fine, Coarse, Both };

const char* to_string(Category c) noexcept;

/// Fine (finger-articulation) gestures among the 14 ids; the rest are coarse.
struct GestureCategoryMap {
  std::set<int> fine{1, 3, 4, 5, 6};  // Grab, Expand, Pinch, Rotation CW, Rotation CCW

  /// Throws InvalidConfig unless every id is in 1..14.
  void validate() const;
  bool matches(int gesture_14, Category filter) const;
};

/// 14-gesture id of a 1-based class label for `classes` in {14, 28}.
int gesture_of(int label, int classes);

/// Fraction of correct predictions over samples whose true gesture falls in
/// `filter`. Labels are 1-based class ids. Throws ShapeMismatch or
/// EmptyFilter.
double accuracy(std::span<const int> predictions, std::span<const int> labels, Category filter,
                const GestureCategoryMap& map = {}, int classes = 14);

struct SplitSummary {
  double best = 0.0;
  double worst = 0.0;
  double avg = 0.0;
  double std = 0.0;  // population
};

/// Throws InvalidConfig when `values` is empty.
SplitSummary aggregate_splits(std::span<const double> values);

/// ceil(label_28 / 2); throws OutOfRange outside 1..28.
int collapse_28_to_14(int label_28);

/// Rows are true classes, columns predictions; ids are 1-based.
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(int classes = 14);

  /// Throws OutOfRange for ids outside 1..classes.
  void add(int truth, int predicted);
  void add(std::span<const int> truths, std::span<const int> predictions);
  ConfusionMatrix& operator+=(const ConfusionMatrix& other);

  int classes() const { return classes_; }
  long at(int truth, int predicted) const;
  long row_sum(int truth) const;
  long total() const;
  long trace() const;
  /// trace / total; throws EmptyFilter when empty.
  double accuracy() const;

 private:
  int classes_;
  std::vector<long> counts_;
};

/// Accuracy after collapsing predictions and labels to 14 classes minus the
/// raw 28-class accuracy.
double larfd(std::span<const int> predictions_28, std::span<const int> labels_28);

struct SplitResult {
  int held_out_subject = 0;
  std::vector<int> labels;       // 1-based
  std::vector<int> predictions;  // 1-based
  std::optional<double> fine;
  std::optional<double> coarse;
  double both = 0.0;
};

/// Scores one split's predictions.
SplitResult score_split(int held_out_subject, std::vector<int> predictions,
                        std::vector<int> labels, const GestureCategoryMap& map, int classes);

struct EvaluationReport {
  int classes = 14;
  std::vector<SplitResult> splits;
  std::optional<SplitSummary> fine;
  std::optional<SplitSummary> coarse;
  SplitSummary both;
  ConfusionMatrix confusion;
  std::optional<double> larfd;  // 28-class runs, pooled over all splits
};

/// Aggregates per-split results; throws InvalidConfig when `splits` is empty.
EvaluationReport make_report(std::vector<SplitResult> splits, int classes);

}  // namespace hgr
