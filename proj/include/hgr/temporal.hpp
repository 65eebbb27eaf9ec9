#pragma once

#include <span>
#include <vector>

#include "hgr/skeleton.hpp"

namespace hgr {

/// Default dynamic-pose lags.
inline const std::vector<int> kDefaultLags{1, 5, 10};

/// Wraps an angle to (-pi, pi].
double wrap_angle(double radians);

/// Stacks [base, base - base(first frame), base - base(t - s) for s in lags]
/// per frame. Frame indices t - s below the first frame are clamped to it.
/// Columns flagged in `angular` have their differences wrapped to (-pi, pi].
FeatureMatrix temporal_pose_features(const FeatureMatrix& base, std::span<const int> lags,
                                     std::span<const bool> angular);

}  // namespace hgr
