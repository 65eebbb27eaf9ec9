#include "hgr/global_motion.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Geometry>
#include <Eigen/SVD>

#include "hgr/error.hpp"

namespace hgr {

namespace {

constexpr double kPi = std::numbers::pi;

double deg(double d) { return d * kPi / 180.0; }

/// atan2 mapped to (-pi, pi].
double atan2_half_open(double y, double x) {
  const double a = std::atan2(y, x);
  return a <= -kPi ? a + 2.0 * kPi : a;
}

Vec3 centroid(std::span<const Vec3> pts) {
  Vec3 c = Vec3::Zero();
  for (const auto& p : pts) {
    c += p;
  }
  return c / static_cast<double>(pts.size());
}

bool rank_below_two(std::span<const Vec3> pts, const Vec3& c) {
  Eigen::Matrix3d scatter = Eigen::Matrix3d::Zero();
  for (const auto& p : pts) {
    const Vec3 d = p - c;
    scatter += d * d.transpose();
  }
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(scatter);
  const auto s = svd.singularValues();
  return s(0) <= 0.0 || s(1) <= 1e-12 * s(0);
}

/// Integral of exp(-u^2 / 2) over [0, upper], composite Simpson.
double unit_gaussian_mass(double upper) {
  constexpr int kPanels = 512;
  if (upper <= 0.0) {
    return 0.0;
  }
  const double h = upper / kPanels;
  auto g = [](double u) { return std::exp(-0.5 * u * u); };
  double sum = g(0.0) + g(upper);
  for (int k = 1; k < kPanels; ++k) {
    sum += (k % 2 == 1 ? 4.0 : 2.0) * g(k * h);
  }
  return sum * h / 3.0;
}

}  // namespace

ReferencePalm ReferencePalm::standard() {
  ReferencePalm ref;
  constexpr double kRadius = 0.04;
  ref.points[0] = Vec3(0.0, -0.08, 0.0);
  ref.points[1] = Vec3::Zero();
  const std::array<double, kFingerCount> azimuths{-40.0, -20.0, 0.0, 20.0, 40.0};
  for (int f = 0; f < kFingerCount; ++f) {
    const double a = deg(azimuths[static_cast<std::size_t>(f)]);
    ref.points[static_cast<std::size_t>(2 + f)] =
        Vec3(kRadius * std::sin(a), kRadius * std::cos(a), 0.0);
  }
  const Vec3 c = centroid(ref.points);
  for (auto& p : ref.points) {
    p -= c;
  }
  return ref;
}

Vec3 ReferencePalm::normal() const {
  const Vec3 across = points[6] - points[2];
  const Vec3 along = points[4] - points[0];
  return across.cross(along).normalized();
}

RigidTransform RigidTransform::inverse() const {
  RigidTransform inv;
  inv.rotation = rotation.transpose();
  inv.translation = -(inv.rotation * translation);
  return inv;
}

RigidTransform kabsch_align(std::span<const Vec3> points, std::span<const Vec3> reference) {
  if (points.size() != reference.size() || points.size() < 3) {
    throw Error(Errc::ShapeMismatch, "kabsch needs two corresponding sets of >= 3 points");
  }
  const Vec3 cp = centroid(points);
  const Vec3 cr = centroid(reference);
  if (rank_below_two(points, cp) || rank_below_two(reference, cr)) {
    throw Error(Errc::DegenerateInput, "centered point set has rank < 2");
  }
  Mat3 cov = Mat3::Zero();
  for (std::size_t i = 0; i < points.size(); ++i) {
    cov += (reference[i] - cr) * (points[i] - cp).transpose();
  }
  Eigen::JacobiSVD<Mat3> svd(cov, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Mat3& u = svd.matrixU();
  const Mat3& v = svd.matrixV();
  Mat3 d = Mat3::Identity();
  d(2, 2) = (v * u.transpose()).determinant() < 0.0 ? -1.0 : 1.0;

  RigidTransform out;
  out.rotation = v * d * u.transpose();
  out.translation = cp - out.rotation * cr;
  return out;
}

RigidTransform kabsch_align(std::span<const Vec3> points, const ReferencePalm& reference) {
  return kabsch_align(points, std::span<const Vec3>(reference.points));
}

Mat3 euler_to_rotation(const Vec3& angles, EulerConvention convention) {
  const Eigen::AngleAxisd rx(angles.x(), Vec3::UnitX());
  const Eigen::AngleAxisd ry(angles.y(), Vec3::UnitY());
  const Eigen::AngleAxisd rz(angles.z(), Vec3::UnitZ());
  if (convention == EulerConvention::XYZ) {
    return (rx * ry * rz).toRotationMatrix();
  }
  return (rz * ry * rx).toRotationMatrix();
}

Vec3 rotation_to_euler(const Mat3& r, EulerConvention convention) {
  const double ortho = (r.transpose() * r - Mat3::Identity()).cwiseAbs().maxCoeff();
  if (ortho > 1e-6 || r.determinant() < 0.0) {
    throw Error(Errc::NotARotation, "matrix is not a proper rotation");
  }
  constexpr double kGimbal = 1.0 - 1e-9;
  if (convention == EulerConvention::XYZ) {
    const double s = std::clamp(r(0, 2), -1.0, 1.0);
    const double ry = std::atan2(s, std::hypot(r(0, 0), r(0, 1)));
    if (std::abs(s) > kGimbal) {
      return {atan2_half_open(r(2, 1), r(1, 1)), ry, 0.0};
    }
    return {atan2_half_open(-r(1, 2), r(2, 2)), ry, atan2_half_open(-r(0, 1), r(0, 0))};
  }
  const double s = std::clamp(-r(2, 0), -1.0, 1.0);
  const double ry = std::atan2(s, std::hypot(r(0, 0), r(1, 0)));
  if (std::abs(s) > kGimbal) {
    return {atan2_half_open(-r(1, 2), r(1, 1)), ry, 0.0};
  }
  return {atan2_half_open(r(2, 1), r(2, 2)), ry, atan2_half_open(r(1, 0), r(0, 0))};
}

Spherical cartesian_to_spherical(const Vec3& v) {
  const double rho = v.norm();
  if (rho == 0.0) {
    return {};
  }
  return {rho, std::acos(std::clamp(v.z() / rho, -1.0, 1.0)), atan2_half_open(v.y(), v.x())};
}

std::vector<double> dad_thresholds(int bins, double sigma) {
  if (bins < 1 || !(sigma > 0.0) || !std::isfinite(sigma)) {
    throw Error(Errc::InvalidConfig, "DAD needs M >= 1 and sigma > 0", bins);
  }
  // The kernel scales exactly with sigma, so solve in units of sigma.
  const double total = unit_gaussian_mass(1.0);
  std::vector<double> eta(static_cast<std::size_t>(bins));
  double lo_bound = 0.0;
  for (int i = 1; i < bins; ++i) {
    const double target = total * i / bins;
    double lo = lo_bound;
    double hi = 1.0;
    while (hi - lo > 1e-10) {
      const double mid = 0.5 * (lo + hi);
      (unit_gaussian_mass(mid) < target ? lo : hi) = mid;
    }
    lo_bound = 0.5 * (lo + hi);
    eta[static_cast<std::size_t>(i - 1)] = lo_bound * sigma;
  }
  eta.back() = sigma;
  return eta;
}

DadConfig DadConfig::make(int bins, double sigma) {
  return {bins, sigma, dad_thresholds(bins, sigma)};
}

int discretize_rho(double rho, const DadConfig& config) {
  const auto it = std::lower_bound(config.thresholds.begin(), config.thresholds.end(), rho);
  if (it == config.thresholds.end()) {
    return config.bins;
  }
  return static_cast<int>(it - config.thresholds.begin()) + 1;
}

namespace {

RigidTransform frame_pose(const HandSkeleton& frame, const JointLayout& layout,
                          const ReferencePalm& reference) {
  std::array<Vec3, kPalmPointCount> pts;
  const auto idx = layout.palm_joints();
  for (std::size_t k = 0; k < idx.size(); ++k) {
    pts[k] = frame.joints.at(static_cast<std::size_t>(idx[k]));
  }
  return kabsch_align(pts, reference);
}

}  // namespace

GlobalPose global_pose(const HandSkeleton& frame, const JointLayout& layout,
                       const ReferencePalm& reference, EulerConvention convention) {
  const RigidTransform fit = frame_pose(frame, layout, reference);
  return {rotation_to_euler(fit.rotation, convention), cartesian_to_spherical(fit.translation)};
}

int global_feature_dims(const GlobalMotionOptions& options) {
  return kGlobalPoseDims * static_cast<int>(2 + options.lags.size());
}

FeatureMatrix global_features(const SkeletonSequence& seq, const JointLayout& layout,
                              const ReferencePalm& reference, const GlobalMotionOptions& options) {
  const auto frames = static_cast<Eigen::Index>(seq.frames.size());
  FeatureMatrix base(frames, kGlobalPoseDims);
  if (frames == 0) {
    return FeatureMatrix(0, global_feature_dims(options));
  }
  const DadConfig dad =
      DadConfig::make(options.bins, options.sigma_scale * palm_radius(seq.frames.front(), layout));

  Vec3 origin = Vec3::Zero();
  for (Eigen::Index t = 0; t < frames; ++t) {
    RigidTransform fit;
    try {
      fit = frame_pose(seq.frames[static_cast<std::size_t>(t)], layout, reference);
    } catch (const Error& e) {
      throw Error(e.code(), "frame " + std::to_string(t) + ": " + e.message(), static_cast<int>(t));
    }
    if (t == 0 && options.rho_reference == RhoReference::FirstFrame) {
      origin = fit.translation;
    }
    const Spherical sph = cartesian_to_spherical(fit.translation - origin);
    const Vec3 rot = rotation_to_euler(fit.rotation, options.euler);
    base.row(t) << static_cast<double>(discretize_rho(sph.rho, dad)), sph.theta, sph.phi, rot.x(),
        rot.y(), rot.z();
  }
  static constexpr std::array<bool, kGlobalPoseDims> kAngular{false, true, true, true, true, true};
  return temporal_pose_features(base, options.lags, kAngular);
}

}  // namespace hgr
