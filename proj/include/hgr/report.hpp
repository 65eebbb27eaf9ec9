#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "hgr/evaluation.hpp"

namespace hgr {

/// DHG gesture names, 1..14.
const std::string& gesture_name(int gesture_14);

/// Names for class ids 1..classes; 28-class names carry a `_f1`/`_f2` suffix.
std::vector<std::string> class_names(int classes);

/// Human-readable table: best / worst / avg / std per category, in percent.
void write_summary_text(const EvaluationReport& report, std::ostream& out);
/// category,best,worst,avg,std (fractions), plus a larfd row for 28 classes.
void write_summary_csv(const EvaluationReport& report, std::ostream& out);
/// subject,test_count,fine,coarse,both; empty cells for absent categories.
void write_splits_csv(const EvaluationReport& report, std::ostream& out);
/// Header row and column of class names; rows are true classes.
void write_confusion_csv(const ConfusionMatrix& confusion, std::ostream& out);

/// Writes summary.txt, summary.csv, splits.csv and confusion.csv into `dir`
/// (created if needed). Throws IoError.
void write_report(const EvaluationReport& report, const std::filesystem::path& dir);

}  // namespace hgr
