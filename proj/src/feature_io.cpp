#include "hgr/feature_io.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <tuple>

#include "binary_io.hpp"
#include "hgr/error.hpp"

namespace hgr {

namespace {

constexpr int kVersion = 1;

long read_field(std::istream& in, const std::string& key) {
  std::string line;
  if (!std::getline(in, line)) {
    throw Error(Errc::FormatError, "feature header ended before '" + key + "'");
  }
  std::istringstream ls(line);
  std::string found;
  long value = 0;
  if (!(ls >> found) || found != key || !(ls >> value)) {
    throw Error(Errc::FormatError, "expected '" + key + " <value>' but found '" + line + "'");
  }
  return value;
}

}  // namespace

void write_feature_file(const FeatureFile& file, std::ostream& out) {
  out << "hgr-features " << kVersion << '\n'
      << "kind " << to_string(file.kind) << '\n'
      << "gesture " << file.info.gesture << '\n'
      << "finger " << file.info.finger << '\n'
      << "subject " << file.info.subject << '\n'
      << "trial " << file.info.trial << '\n'
      << "frames " << file.values.rows() << '\n'
      << "dims " << file.values.cols() << '\n'
      << "end\n";
  for (Eigen::Index t = 0; t < file.values.rows(); ++t) {
    for (Eigen::Index d = 0; d < file.values.cols(); ++d) {
      detail::write_le_double(out, file.values(t, d));
    }
  }
  if (!out) {
    throw Error(Errc::IoError, "failed to write feature file");
  }
}

void write_feature_file(const FeatureFile& file, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(Errc::IoError, "cannot open " + path.string() + " for writing");
  }
  write_feature_file(file, out);
}

FeatureFile read_feature_file(std::istream& in) {
  FeatureFile file;
  if (read_field(in, "hgr-features") != kVersion) {
    throw Error(Errc::FormatError, "unsupported feature file version");
  }
  {
    std::string line;
    std::getline(in, line);
    std::istringstream ls(line);
    std::string key;
    std::string kind;
    if (!(ls >> key >> kind) || key != "kind") {
      throw Error(Errc::FormatError, "expected 'kind <name>' but found '" + line + "'");
    }
    try {
      file.kind = feature_kind_from_string(kind);
    } catch (const Error&) {
      throw Error(Errc::FormatError, "unknown feature kind '" + kind + "'");
    }
  }
  file.info.gesture = static_cast<int>(read_field(in, "gesture"));
  file.info.finger = static_cast<int>(read_field(in, "finger"));
  file.info.subject = static_cast<int>(read_field(in, "subject"));
  file.info.trial = static_cast<int>(read_field(in, "trial"));
  const long frames = read_field(in, "frames");
  const long dims = read_field(in, "dims");
  if (frames < 0 || dims < 1 || frames > (1L << 24) || dims > (1L << 16)) {
    throw Error(Errc::FormatError, "implausible feature shape");
  }
  std::string end;
  if (!std::getline(in, end) || end != "end") {
    throw Error(Errc::FormatError, "missing 'end' after feature header");
  }
  file.values.resize(frames, dims);
  for (Eigen::Index t = 0; t < frames; ++t) {
    for (Eigen::Index d = 0; d < dims; ++d) {
      file.values(t, d) = detail::read_le_double(in);
    }
  }
  return file;
}

FeatureFile read_feature_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(Errc::IoError, "cannot open " + path.string());
  }
  try {
    return read_feature_file(in);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.message(), e.where(), e.detail());
  }
}

std::string feature_file_name(FeatureKind kind, const SequenceInfo& info) {
  std::ostringstream name;
  name << std::setfill('0') << 'g' << std::setw(2) << info.gesture << "_f" << info.finger << "_s"
       << std::setw(2) << info.subject << "_t" << std::setw(2) << info.trial << '.'
       << to_string(kind) << ".feat";
  return name.str();
}

std::size_t write_feature_dir(const std::vector<FeatureStreams>& features,
                              const std::vector<FeatureKind>& kinds,
                              const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw Error(Errc::IoError, "cannot create " + dir.string() + ": " + ec.message());
  }
  std::size_t written = 0;
  for (const auto& f : features) {
    for (FeatureKind kind : kinds) {
      write_feature_file({kind, f.info, f[kind]}, dir / feature_file_name(kind, f.info));
      ++written;
    }
  }
  return written;
}

std::vector<FeatureStreams> read_feature_dir(
    const std::filesystem::path& dir, const std::optional<std::array<int, kBranchCount>>& expected_dims) {
  if (!std::filesystem::is_directory(dir)) {
    throw Error(Errc::MissingRoot, "feature directory not found: " + dir.string());
  }
  std::vector<std::filesystem::path> paths;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".feat") {
      paths.push_back(e.path());
    }
  }
  std::sort(paths.begin(), paths.end());
  if (paths.empty()) {
    throw Error(Errc::EmptyDataset, "no feature files in " + dir.string());
  }
  using Key = std::tuple<int, int, int, int>;
  std::map<Key, std::pair<FeatureStreams, std::array<bool, kBranchCount>>> grouped;
  for (const auto& p : paths) {
    FeatureFile f = read_feature_file(p);
    const auto k = static_cast<std::size_t>(f.kind);
    if (expected_dims && f.values.cols() != (*expected_dims)[k]) {
      throw Error(Errc::ShapeMismatch,
                  p.string() + ": " + to_string(f.kind) + " features have " +
                      std::to_string(f.values.cols()) + " dims, expected " +
                      std::to_string((*expected_dims)[k]),
                  static_cast<int>(f.values.cols()), (*expected_dims)[k]);
    }
    auto& [streams, present] =
        grouped[{f.info.gesture, f.info.finger, f.info.subject, f.info.trial}];
    if (present[k]) {
      throw Error(Errc::FormatError, p.string() + ": duplicate " + to_string(f.kind) + " stream");
    }
    present[k] = true;
    streams.info = f.info;
    streams.streams[k] = std::move(f.values);
  }
  std::vector<FeatureStreams> out;
  out.reserve(grouped.size());
  for (auto& [key, entry] : grouped) {
    auto& [streams, present] = entry;
    for (std::size_t k = 0; k < kBranchCount; ++k) {
      if (!present[k]) {
        throw Error(Errc::FormatError, "sequence " + feature_file_name(static_cast<FeatureKind>(k), streams.info) +
                                           " is missing its " + to_string(static_cast<FeatureKind>(k)) +
                                           " stream");
      }
      if (streams.streams[k].rows() != streams.streams[0].rows()) {
        throw Error(Errc::FormatError, "streams of one sequence differ in frame count");
      }
    }
    out.push_back(std::move(streams));
  }
  return out;
}

}  // namespace hgr
