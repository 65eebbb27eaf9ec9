#include "hgr/report.hpp"

#include <array>
#include <fstream>
#include <iomanip>
#include <ostream>

#include "hgr/error.hpp"

namespace hgr {

const std::string& gesture_name(int gesture_14) {
  static const std::array<std::string, 14> kNames = {
      "Grab",        "Tap",        "Expand",   "Pinch",      "Rotation CW",
      "Rotation CCW", "Swipe Right", "Swipe Left", "Swipe Up", "Swipe Down",
      "Swipe X",     "Swipe V",    "Swipe +",  "Shake"};
  if (gesture_14 < 1 || gesture_14 > 14) {
    throw Error(Errc::OutOfRange, "gesture id outside 1..14", gesture_14);
  }
  return kNames[static_cast<std::size_t>(gesture_14 - 1)];
}

std::vector<std::string> class_names(int classes) {
  std::vector<std::string> names;
  for (int c = 1; c <= classes; ++c) {
    if (classes == 28) {
      names.push_back(gesture_name(collapse_28_to_14(c)) + (c % 2 == 1 ? "_f1" : "_f2"));
    } else {
      names.push_back(gesture_name(c));
    }
  }
  return names;
}

namespace {

void summary_row(std::ostream& out, const char* name, const std::optional<SplitSummary>& s) {
  out << std::left << std::setw(8) << name << std::right;
  if (!s) {
    out << "       n/a       n/a       n/a       n/a\n";
    return;
  }
  out << std::fixed << std::setprecision(2) << std::setw(10) << 100.0 * s->best << std::setw(10)
      << 100.0 * s->worst << std::setw(10) << 100.0 * s->avg << std::setw(10) << 100.0 * s->std
      << '\n';
}

void csv_row(std::ostream& out, const char* name, const std::optional<SplitSummary>& s) {
  out << name;
  if (s) {
    out << std::fixed << std::setprecision(6) << ',' << s->best << ',' << s->worst << ','
        << s->avg << ',' << s->std;
  } else {
    out << ",,,,";
  }
  out << '\n';
}

void csv_cell(std::ostream& out, const std::optional<double>& v) {
  out << ',';
  if (v) {
    out << std::fixed << std::setprecision(6) << *v;
  }
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) {
    return s;
  }
  std::string q = "\"";
  for (char c : s) {
    q += c == '"' ? std::string("\"\"") : std::string(1, c);
  }
  return q + '"';
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(Errc::IoError, "cannot open " + path.string() + " for writing");
  }
  return out;
}

}  // namespace

void write_summary_text(const EvaluationReport& report, std::ostream& out) {
  std::size_t tests = 0;
  for (const auto& s : report.splits) {
    tests += s.labels.size();
  }
  out << "LOOCV recognition rates (%), " << report.classes << " classes, "
      << report.splits.size() << " splits, " << tests << " test sequences\n\n";
  out << "category      best     worst       avg       std\n";
  summary_row(out, "fine", report.fine);
  summary_row(out, "coarse", report.coarse);
  summary_row(out, "both", std::optional<SplitSummary>(report.both));
  out << "\noverall accuracy: " << std::fixed << std::setprecision(2)
      << 100.0 * report.confusion.accuracy() << '\n';
  if (report.larfd) {
    out << "LARFD: " << std::fixed << std::setprecision(4) << *report.larfd << '\n';
  }
}

void write_summary_csv(const EvaluationReport& report, std::ostream& out) {
  out << "category,best,worst,avg,std\n";
  csv_row(out, "fine", report.fine);
  csv_row(out, "coarse", report.coarse);
  csv_row(out, "both", std::optional<SplitSummary>(report.both));
  if (report.larfd) {
    out << "larfd," << std::fixed << std::setprecision(6) << *report.larfd << ",,,\n";
  }
}

void write_splits_csv(const EvaluationReport& report, std::ostream& out) {
  out << "subject,test_count,fine,coarse,both\n";
  for (const auto& s : report.splits) {
    out << s.held_out_subject << ',' << s.labels.size();
    csv_cell(out, s.fine);
    csv_cell(out, s.coarse);
    csv_cell(out, std::optional<double>(s.both));
    out << '\n';
  }
}

void write_confusion_csv(const ConfusionMatrix& confusion, std::ostream& out) {
  const auto names = class_names(confusion.classes());
  out << "truth\\predicted";
  for (const auto& n : names) {
    out << ',' << csv_quote(n);
  }
  out << '\n';
  for (int t = 1; t <= confusion.classes(); ++t) {
    out << csv_quote(names[static_cast<std::size_t>(t - 1)]);
    for (int p = 1; p <= confusion.classes(); ++p) {
      out << ',' << confusion.at(t, p);
    }
    out << '\n';
  }
}

void write_report(const EvaluationReport& report, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw Error(Errc::IoError, "cannot create " + dir.string() + ": " + ec.message());
  }
  {
    auto out = open_out(dir / "summary.txt");
    write_summary_text(report, out);
  }
  {
    auto out = open_out(dir / "summary.csv");
    write_summary_csv(report, out);
  }
  {
    auto out = open_out(dir / "splits.csv");
    write_splits_csv(report, out);
  }
  {
    auto out = open_out(dir / "confusion.csv");
    write_confusion_csv(report.confusion, out);
  }
}

}  // namespace hgr
