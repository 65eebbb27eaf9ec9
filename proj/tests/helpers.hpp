#pragma once

#include <atomic>
#include <cmath>
#include <filesystem>
#include <functional>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

#include <Eigen/Geometry>

#include "hgr/network.hpp"
#include "hgr/skeleton.hpp"
#include "hgr/synth.hpp"

namespace testing {

/// Scratch directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("hgr_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline hgr::Mat3 random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::Quaterniond q(n(rng), n(rng), n(rng), n(rng));
  q.normalize();
  return q.toRotationMatrix();
}

inline hgr::Vec3 random_vec(std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  return {u(rng), u(rng), u(rng)};
}

inline hgr::FingerAngles random_angles(std::mt19937_64& rng, double limit = 1.2) {
  std::uniform_real_distribution<double> u(-limit, limit);
  hgr::FingerAngles a;
  for (double& x : a) {
    x = u(rng);
  }
  return a;
}

inline hgr::HandSkeleton rigid(const hgr::HandSkeleton& s, const hgr::Mat3& r, const hgr::Vec3& t) {
  hgr::HandSkeleton out = s;
  for (auto& j : out.joints) {
    j = r * j + t;
  }
  return out;
}

/// Gaussian mass of exp(-x^2 / 2) on [0, x], closed form.
inline double gaussian_mass(double x) { return std::sqrt(M_PI / 2.0) * std::erf(x / std::sqrt(2.0)); }

/// Composite trapezoid rule for exp(-x^2 / (2 sigma^2)) on [0, b].
inline double trapezoid_mass(double b, double sigma, int panels) {
  const double h = b / panels;
  double sum = 0.5 * (1.0 + std::exp(-b * b / (2 * sigma * sigma)));
  for (int i = 1; i < panels; ++i) {
    const double x = i * h;
    sum += std::exp(-x * x / (2 * sigma * sigma));
  }
  return sum * h;
}

/// A sequence of FK frames with the given pose and angle paths.
inline hgr::SkeletonSequence fk_sequence(int frames,
                                         const std::function<hgr::RigidPose(int)>& pose,
                                         const std::function<hgr::FingerAngles(int)>& angles) {
  hgr::SkeletonSequence seq;
  const auto hand = hgr::HandTemplate::standard();
  for (int t = 0; t < frames; ++t) {
    seq.frames.push_back(hgr::forward_kinematics(hand, pose(t), angles(t)));
  }
  return seq;
}

inline hgr::nn::NetworkConfig tiny_config(int d0, int d1, int d2, int hidden, int classes,
                                          bool bidirectional = true) {
  hgr::nn::NetworkConfig c;
  const int dims[3] = {d0, d1, d2};
  for (int k = 0; k < 3; ++k) {
    c.branches[static_cast<std::size_t>(k)].input_dim = dims[k];
    c.branches[static_cast<std::size_t>(k)].lstm_hidden = hidden;
    c.branches[static_cast<std::size_t>(k)].fc_out = hidden + 1;
  }
  c.head_hidden = {6, 5};
  c.classes = classes;
  c.bidirectional = bidirectional;
  return c;
}

/// Random samples with lengths in [min_len, max_len].
inline std::vector<hgr::nn::Sample> random_samples(const hgr::nn::NetworkConfig& c, int count,
                                                   int min_len, int max_len, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> len(min_len, max_len);
  std::uniform_int_distribution<int> label(0, c.classes - 1);
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<hgr::nn::Sample> out;
  for (int i = 0; i < count; ++i) {
    hgr::nn::Sample s;
    const int t = len(rng);
    for (std::size_t k = 0; k < 3; ++k) {
      s.inputs[k].resize(c.branches[k].input_dim, t);
      for (Eigen::Index j = 0; j < s.inputs[k].size(); ++j) {
        s.inputs[k].data()[j] = n(rng);
      }
    }
    s.label = label(rng);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace testing
