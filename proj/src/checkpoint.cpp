#include "hgr/checkpoint.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

#include "binary_io.hpp"
#include "hgr/error.hpp"

namespace hgr::nn {

namespace {

constexpr int kVersion = 1;

std::istringstream expect_line(std::istream& in, const std::string& key) {
  std::string line;
  if (!std::getline(in, line)) {
    throw Error(Errc::FormatError, "checkpoint header ended before '" + key + "'");
  }
  std::istringstream ls(line);
  std::string found;
  ls >> found;
  if (found != key) {
    throw Error(Errc::FormatError, "expected '" + key + "' but found '" + found + "'");
  }
  return ls;
}

template <class T>
T read_value(std::istringstream& ls, const std::string& key) {
  T value{};
  if (!(ls >> value)) {
    throw Error(Errc::FormatError, "bad value for '" + key + "'");
  }
  return value;
}

}  // namespace

void save_checkpoint(const NetworkModel& model, std::ostream& out) {
  const NetworkConfig& c = model.config;
  std::ostringstream h;
  h << std::setprecision(17);
  h << "hgr-checkpoint " << kVersion << '\n';
  h << "seed " << model.seed << '\n';
  h << "classes " << c.classes << '\n';
  h << "bidirectional " << (c.bidirectional ? 1 : 0) << '\n';
  h << "dropout " << c.dropout << '\n';
  h << "head " << c.head_hidden.size();
  for (int w : c.head_hidden) {
    h << ' ' << w;
  }
  h << '\n';
  for (std::size_t k = 0; k < kBranchCount; ++k) {
    const BranchConfig& b = c.branches[k];
    h << "branch " << k << ' ' << (b.enabled ? 1 : 0) << ' ' << b.input_dim << ' '
      << b.lstm_hidden << ' ' << b.lstm_layers << ' ' << b.fc_out << '\n';
  }
  for (std::size_t k = 0; k < kBranchCount; ++k) {
    const Standardizer& n = model.norm[k];
    h << "norm " << k << ' ' << n.mean.size();
    for (Eigen::Index i = 0; i < n.mean.size(); ++i) {
      h << ' ' << n.mean(i);
    }
    for (Eigen::Index i = 0; i < n.scale.size(); ++i) {
      h << ' ' << n.scale(i);
    }
    h << '\n';
  }
  h << "parameters " << model.params.size() << '\n';
  h << "end\n";
  out << h.str();
  for (auto block : model.params.blocks()) {
    for (double x : block) {
      detail::write_le_double(out, x);
    }
  }
  if (!out) {
    throw Error(Errc::IoError, "failed to write checkpoint");
  }
}

void save_checkpoint(const NetworkModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(Errc::IoError, "cannot open " + path.string() + " for writing");
  }
  save_checkpoint(model, out);
}

NetworkModel load_checkpoint(std::istream& in) {
  NetworkConfig c;
  {
    auto ls = expect_line(in, "hgr-checkpoint");
    const int version = read_value<int>(ls, "hgr-checkpoint");
    if (version != kVersion) {
      throw Error(Errc::FormatError, "unsupported checkpoint version", version);
    }
  }
  std::uint64_t seed;
  {
    auto ls = expect_line(in, "seed");
    seed = read_value<std::uint64_t>(ls, "seed");
  }
  {
    auto ls = expect_line(in, "classes");
    c.classes = read_value<int>(ls, "classes");
  }
  {
    auto ls = expect_line(in, "bidirectional");
    c.bidirectional = read_value<int>(ls, "bidirectional") != 0;
  }
  {
    auto ls = expect_line(in, "dropout");
    c.dropout = read_value<double>(ls, "dropout");
  }
  {
    auto ls = expect_line(in, "head");
    const auto n = read_value<std::size_t>(ls, "head");
    if (n > 64) {
      throw Error(Errc::FormatError, "implausible head depth");
    }
    c.head_hidden.clear();
    for (std::size_t i = 0; i < n; ++i) {
      c.head_hidden.push_back(read_value<int>(ls, "head"));
    }
  }
  for (std::size_t k = 0; k < kBranchCount; ++k) {
    auto ls = expect_line(in, "branch");
    if (read_value<std::size_t>(ls, "branch") != k) {
      throw Error(Errc::FormatError, "branch lines out of order");
    }
    BranchConfig& b = c.branches[k];
    b.enabled = read_value<int>(ls, "branch") != 0;
    b.input_dim = read_value<int>(ls, "branch");
    b.lstm_hidden = read_value<int>(ls, "branch");
    b.lstm_layers = read_value<int>(ls, "branch");
    b.fc_out = read_value<int>(ls, "branch");
  }
  try {
    c.validate();
  } catch (const Error& e) {
    throw Error(Errc::FormatError, "invalid architecture: " + e.message());
  }
  NetworkModel model = init_model(c, seed);
  for (std::size_t k = 0; k < kBranchCount; ++k) {
    auto ls = expect_line(in, "norm");
    if (read_value<std::size_t>(ls, "norm") != k) {
      throw Error(Errc::FormatError, "norm lines out of order");
    }
    const auto dims = read_value<Eigen::Index>(ls, "norm");
    if (dims != 0 && dims != c.branches[k].input_dim) {
      throw Error(Errc::FormatError, "normalization size does not match the branch");
    }
    Standardizer& n = model.norm[k];
    n.mean.resize(dims);
    n.scale.resize(dims);
    for (Eigen::Index i = 0; i < dims; ++i) {
      n.mean(i) = read_value<double>(ls, "norm");
    }
    for (Eigen::Index i = 0; i < dims; ++i) {
      n.scale(i) = read_value<double>(ls, "norm");
    }
  }
  {
    auto ls = expect_line(in, "parameters");
    const auto count = read_value<std::size_t>(ls, "parameters");
    if (count != model.params.size()) {
      throw Error(Errc::FormatError, "parameter count does not match the architecture");
    }
  }
  expect_line(in, "end");
  for (auto block : model.params.blocks()) {
    for (double& x : block) {
      x = detail::read_le_double(in);
    }
  }
  return model;
}

NetworkModel load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(Errc::IoError, "cannot open " + path.string());
  }
  return load_checkpoint(in);
}

}  // namespace hgr::nn
