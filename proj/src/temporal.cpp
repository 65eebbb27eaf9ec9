#include "hgr/temporal.hpp"

#include <cmath>
#include <numbers>

#include "hgr/error.hpp"

namespace hgr {

double wrap_angle(double radians) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  double w = std::remainder(radians, kTwoPi);
  if (w <= -std::numbers::pi) {
    w += kTwoPi;
  }
  return w;
}

FeatureMatrix temporal_pose_features(const FeatureMatrix& base, std::span<const int> lags,
                                     std::span<const bool> angular) {
  const Eigen::Index frames = base.rows();
  const Eigen::Index dims = base.cols();
  if (static_cast<Eigen::Index>(angular.size()) != dims) {
    throw Error(Errc::ShapeMismatch, "angular mask width differs from feature width");
  }
  for (int lag : lags) {
    if (lag < 1) {
      throw Error(Errc::InvalidConfig, "dynamic-pose lags must be >= 1", lag);
    }
  }
  const auto blocks = static_cast<Eigen::Index>(2 + lags.size());
  FeatureMatrix out(frames, dims * blocks);
  auto diff = [&](Eigen::Index t, Eigen::Index from, Eigen::Index col0) {
    for (Eigen::Index d = 0; d < dims; ++d) {
      const double delta = base(t, d) - base(from, d);
      out(t, col0 + d) = angular[static_cast<std::size_t>(d)] ? wrap_angle(delta) : delta;
    }
  };
  for (Eigen::Index t = 0; t < frames; ++t) {
    out.block(t, 0, 1, dims) = base.row(t);
    diff(t, 0, dims);
    for (std::size_t k = 0; k < lags.size(); ++k) {
      const Eigen::Index from = std::max<Eigen::Index>(0, t - lags[k]);
      diff(t, from, dims * static_cast<Eigen::Index>(2 + k));
    }
  }
  return out;
}

}  // namespace hgr
