#pragma once

#include <array>
#include <span>
#include <vector>

#include "hgr/skeleton.hpp"
#include "hgr/temporal.hpp"

namespace hgr {

/// Canonical palm template: wrist, palm and the five finger bases of a flat
/// hand facing +z, centered so that the point centroid is the origin.
struct ReferencePalm {
  std::array<Vec3, kPalmPointCount> points;

  /// Wrist 8 cm below the palm joint, finger bases on a 4 cm arc at
  /// azimuths -40..40 degrees from +y (thumb first).
  static ReferencePalm standard();

  /// Unit normal of the palm plane (+z for the standard template).
  Vec3 normal() const;
};

/// p = rotation * p_ref + translation.
struct RigidTransform {
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();

  Vec3 apply(const Vec3& p) const { return rotation * p + translation; }
  RigidTransform inverse() const;
};

/// Least-squares rigid fit mapping `reference` onto `points` (Kabsch, with the
/// determinant-sign correction so the result is a proper rotation).
/// Throws DegenerateInput when either centered set has rank < 2.
RigidTransform kabsch_align(std::span<const Vec3> points, std::span<const Vec3> reference);
RigidTransform kabsch_align(std::span<const Vec3> points, const ReferencePalm& reference);

/// Intrinsic x-y'-z'' (R = Rx Ry Rz) is the default; ZYX means R = Rz Ry Rx.
/// Angles are always reported as (r_x, r_y, r_z).
enum class EulerConvention { XYZ, ZYX };

/// Throws NotARotation if |R^T R - I|_inf > 1e-6 or det R < 0.
Vec3 rotation_to_euler(const Mat3& rotation, EulerConvention convention = EulerConvention::XYZ);
Mat3 euler_to_rotation(const Vec3& angles, EulerConvention convention = EulerConvention::XYZ);

struct Spherical {
  double rho = 0.0;    // >= 0
  double theta = 0.0;  // polar angle from +z, [0, pi]
  double phi = 0.0;    // azimuth, (-pi, pi]
};

Spherical cartesian_to_spherical(const Vec3& v);

/// Distance-adaptive discretization thresholds for the translation
/// amplitude: equal Gaussian-mass bins over [0, sigma].
struct DadConfig {
  int bins = 5;
  double sigma = 1.0;
  std::vector<double> thresholds;  // eta_1 < ... < eta_M == sigma

  static DadConfig make(int bins, double sigma);
};

/// Bisection on the numerically integrated kernel exp(-x^2 / (2 sigma^2)).
std::vector<double> dad_thresholds(int bins, double sigma);

/// Smallest 1-based i with rho <= eta_i; clamps to M above sigma.
int discretize_rho(double rho, const DadConfig& config);

struct GlobalPose {
  Vec3 rotation = Vec3::Zero();  // (r_x, r_y, r_z)
  Spherical translation;
};

/// Where the translation amplitude is measured from. `World` uses the
/// coordinate origin of the skeleton stream; `FirstFrame` uses the hand
/// position of the first frame.
enum class RhoReference { World, FirstFrame };

struct GlobalMotionOptions {
  int bins = 5;
  double sigma_scale = 1.5;  // sigma = sigma_scale * palm radius of the first frame
  std::vector<int> lags = kDefaultLags;
  EulerConvention euler = EulerConvention::XYZ;
  RhoReference rho_reference = RhoReference::World;
};

inline constexpr int kGlobalPoseDims = 6;

/// Rigid pose of one frame relative to the reference palm.
GlobalPose global_pose(const HandSkeleton& frame, const JointLayout& layout,
                       const ReferencePalm& reference,
                       EulerConvention convention = EulerConvention::XYZ);

/// Per-frame [rho_bin, theta, phi, r_x, r_y, r_z] followed by the offset pose
/// and one dynamic-pose block per lag; 30 columns with the default lags.
/// Kabsch failures are rethrown with the frame index in Error::where().
FeatureMatrix global_features(const SkeletonSequence& seq, const JointLayout& layout,
                              const ReferencePalm& reference,
                              const GlobalMotionOptions& options = {});

int global_feature_dims(const GlobalMotionOptions& options = {});

}  // namespace hgr
