#include "hgr/evaluation.hpp"

#include <algorithm>
#include <cmath>

#include "hgr/error.hpp"

namespace hgr {

const char* to_string(Category c) noexcept {
  switch (c) {
    case Category::Fine:
      return "fine";
    case Category::Coarse:
      return "coarse";
    case Category::Both:
      return "both";
  }
  return "?";
}

void GestureCategoryMap::validate() const {
  for (int g : fine) {
    if (g < 1 || g > 14) {
      throw Error(Errc::InvalidConfig, "fine gesture id outside 1..14", g);
    }
  }
}

bool GestureCategoryMap::matches(int gesture_14, Category filter) const {
  switch (filter) {
    case Category::Both:
      return true;
    case Category::Fine:
      return fine.count(gesture_14) != 0;
    case Category::Coarse:
      return fine.count(gesture_14) == 0;
  }
  return false;
}

int gesture_of(int label, int classes) {
  if (classes == 28) {
    return collapse_28_to_14(label);
  }
  if (label < 1 || label > classes) {
    throw Error(Errc::OutOfRange, "class label outside 1..classes", label);
  }
  return label;
}

double accuracy(std::span<const int> predictions, std::span<const int> labels, Category filter,
                const GestureCategoryMap& map, int classes) {
  if (predictions.size() != labels.size()) {
    throw Error(Errc::ShapeMismatch, "predictions and labels differ in length");
  }
  std::size_t total = 0;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (!map.matches(gesture_of(labels[i], classes), filter)) {
      continue;
    }
    ++total;
    correct += predictions[i] == labels[i] ? 1 : 0;
  }
  if (total == 0) {
    throw Error(Errc::EmptyFilter, std::string("no samples in category ") + to_string(filter));
  }
  return static_cast<double>(correct) / static_cast<double>(total);
}

SplitSummary aggregate_splits(std::span<const double> values) {
  if (values.empty()) {
    throw Error(Errc::InvalidConfig, "no splits to aggregate");
  }
  SplitSummary s;
  s.best = *std::max_element(values.begin(), values.end());
  s.worst = *std::min_element(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) {
    sum += v;
  }
  s.avg = sum / static_cast<double>(values.size());
  double sq = 0.0;
  for (double v : values) {
    sq += (v - s.avg) * (v - s.avg);
  }
  s.std = std::sqrt(sq / static_cast<double>(values.size()));
  // Keep worst <= avg <= best despite rounding in the mean.
  s.avg = std::clamp(s.avg, s.worst, s.best);
  return s;
}

int collapse_28_to_14(int label_28) {
  if (label_28 < 1 || label_28 > 28) {
    throw Error(Errc::OutOfRange, "28-class label outside 1..28", label_28);
  }
  return (label_28 + 1) / 2;
}

ConfusionMatrix::ConfusionMatrix(int classes)
    : classes_(classes), counts_(static_cast<std::size_t>(classes) * classes, 0) {
  if (classes < 1) {
    throw Error(Errc::InvalidConfig, "confusion matrix needs at least one class", classes);
  }
}

void ConfusionMatrix::add(int truth, int predicted) {
  if (truth < 1 || truth > classes_) {
    throw Error(Errc::OutOfRange, "true class outside 1..classes", truth);
  }
  if (predicted < 1 || predicted > classes_) {
    throw Error(Errc::OutOfRange, "predicted class outside 1..classes", predicted);
  }
  ++counts_[static_cast<std::size_t>((truth - 1) * classes_ + (predicted - 1))];
}

void ConfusionMatrix::add(std::span<const int> truths, std::span<const int> predictions) {
  if (truths.size() != predictions.size()) {
    throw Error(Errc::ShapeMismatch, "predictions and labels differ in length");
  }
  for (std::size_t i = 0; i < truths.size(); ++i) {
    add(truths[i], predictions[i]);
  }
}

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& other) {
  if (other.classes_ != classes_) {
    throw Error(Errc::ShapeMismatch, "confusion matrices differ in size");
  }
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    counts_[i] += other.counts_[i];
  }
  return *this;
}

long ConfusionMatrix::at(int truth, int predicted) const {
  if (truth < 1 || truth > classes_ || predicted < 1 || predicted > classes_) {
    throw Error(Errc::OutOfRange, "class outside 1..classes");
  }
  return counts_[static_cast<std::size_t>((truth - 1) * classes_ + (predicted - 1))];
}

long ConfusionMatrix::row_sum(int truth) const {
  long sum = 0;
  for (int p = 1; p <= classes_; ++p) {
    sum += at(truth, p);
  }
  return sum;
}

long ConfusionMatrix::total() const {
  long sum = 0;
  for (long c : counts_) {
    sum += c;
  }
  return sum;
}

long ConfusionMatrix::trace() const {
  long sum = 0;
  for (int c = 1; c <= classes_; ++c) {
    sum += at(c, c);
  }
  return sum;
}

double ConfusionMatrix::accuracy() const {
  const long n = total();
  if (n == 0) {
    throw Error(Errc::EmptyFilter, "empty confusion matrix");
  }
  return static_cast<double>(trace()) / static_cast<double>(n);
}

double larfd(std::span<const int> predictions_28, std::span<const int> labels_28) {
  if (predictions_28.size() != labels_28.size()) {
    throw Error(Errc::ShapeMismatch, "predictions and labels differ in length");
  }
  std::vector<int> p14(predictions_28.size());
  std::vector<int> l14(labels_28.size());
  for (std::size_t i = 0; i < p14.size(); ++i) {
    p14[i] = collapse_28_to_14(predictions_28[i]);
    l14[i] = collapse_28_to_14(labels_28[i]);
  }
  return accuracy(p14, l14, Category::Both) -
         accuracy(predictions_28, labels_28, Category::Both, {}, 28);
}

SplitResult score_split(int held_out_subject, std::vector<int> predictions,
                        std::vector<int> labels, const GestureCategoryMap& map, int classes) {
  SplitResult r;
  r.held_out_subject = held_out_subject;
  r.both = accuracy(predictions, labels, Category::Both, map, classes);
  auto optional_accuracy = [&](Category c) -> std::optional<double> {
    for (int l : labels) {
      if (map.matches(gesture_of(l, classes), c)) {
        return accuracy(predictions, labels, c, map, classes);
      }
    }
    return std::nullopt;
  };
  r.fine = optional_accuracy(Category::Fine);
  r.coarse = optional_accuracy(Category::Coarse);
  r.predictions = std::move(predictions);
  r.labels = std::move(labels);
  return r;
}

EvaluationReport make_report(std::vector<SplitResult> splits, int classes) {
  if (splits.empty()) {
    throw Error(Errc::InvalidConfig, "no splits to report");
  }
  EvaluationReport report;
  report.classes = classes;
  report.confusion = ConfusionMatrix(classes);
  std::vector<double> fine;
  std::vector<double> coarse;
  std::vector<double> both;
  std::vector<int> all_predictions;
  std::vector<int> all_labels;
  for (const auto& s : splits) {
    if (s.fine) {
      fine.push_back(*s.fine);
    }
    if (s.coarse) {
      coarse.push_back(*s.coarse);
    }
    both.push_back(s.both);
    report.confusion.add(s.labels, s.predictions);
    all_predictions.insert(all_predictions.end(), s.predictions.begin(), s.predictions.end());
    all_labels.insert(all_labels.end(), s.labels.begin(), s.labels.end());
  }
  if (!fine.empty()) {
    report.fine = aggregate_splits(fine);
  }
  if (!coarse.empty()) {
    report.coarse = aggregate_splits(coarse);
  }
  report.both = aggregate_splits(both);
  if (classes == 28) {
    report.larfd = larfd(all_predictions, all_labels);
  }
  report.splits = std::move(splits);
  return report;
}

}  // namespace hgr
