#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "helpers.hpp"
#include "hgr/error.hpp"
#include "hgr/global_motion.hpp"

using namespace hgr;
using std::numbers::pi;

namespace {

std::vector<Vec3> ref_points() {
  const auto ref = ReferencePalm::standard();
  return {ref.points.begin(), ref.points.end()};
}

Mat3 rot_z(double a) { return Eigen::AngleAxisd(a, Vec3::UnitZ()).toRotationMatrix(); }

}  // namespace

TEST_CASE("reference palm is centered and non-degenerate") {
  const auto ref = ReferencePalm::standard();
  Vec3 c = Vec3::Zero();
  for (const auto& p : ref.points) {
    c += p;
  }
  CHECK(c.norm() < 1e-15);
  CHECK((ref.normal() - Vec3::UnitZ()).norm() < 1e-12);
}

TEST_CASE("kabsch recovers the identity") {
  const auto pts = ref_points();
  const auto fit = kabsch_align(pts, ReferencePalm::standard());
  CHECK((fit.rotation - Mat3::Identity()).norm() < 1e-12);
  CHECK(fit.translation.norm() < 1e-12);
}

TEST_CASE("kabsch recovers a planted quarter turn and shift") {
  const Mat3 r = rot_z(pi / 2);
  const Vec3 t(1, 2, 3);
  auto pts = ref_points();
  for (auto& p : pts) {
    p = r * p + t;
  }
  const auto fit = kabsch_align(pts, ReferencePalm::standard());
  CHECK((fit.rotation - r).norm() < 1e-9);
  CHECK((fit.translation - t).norm() < 1e-9);
}

TEST_CASE("kabsch is accurate under small noise and always proper") {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> noise(0.0, 1e-4);
  for (int trial = 0; trial < 100; ++trial) {
    const Mat3 r = testing::random_rotation(rng);
    const Vec3 t = testing::random_vec(rng, 1.0);
    auto pts = ref_points();
    for (auto& p : pts) {
      p = r * p + t + Vec3(noise(rng), noise(rng), noise(rng));
    }
    const auto fit = kabsch_align(pts, ReferencePalm::standard());
    const Eigen::AngleAxisd err(fit.rotation.transpose() * r);
    CHECK(std::abs(err.angle()) < 1e-2);
    CHECK(fit.rotation.determinant() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(((fit.rotation.transpose() * fit.rotation) - Mat3::Identity()).cwiseAbs().maxCoeff() <
          1e-9);
  }
}

TEST_CASE("kabsch corrects reflections to proper rotations") {
  auto pts = ref_points();
  for (auto& p : pts) {
    p.z() = -p.z() + 0.001 * p.x();  // mirrored, slightly non-planar
  }
  const auto fit = kabsch_align(pts, ReferencePalm::standard());
  CHECK(fit.rotation.determinant() == doctest::Approx(1.0));
}

TEST_CASE("kabsch rejects degenerate input") {
  std::vector<Vec3> line;
  for (int i = 0; i < 7; ++i) {
    line.emplace_back(0.01 * i, 0.02 * i, 0);
  }
  try {
    kabsch_align(line, ReferencePalm::standard());
    FAIL("expected DegenerateInput");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::DegenerateInput);
  }
  std::vector<Vec3> same(7, Vec3(1, 1, 1));
  CHECK_THROWS_AS(kabsch_align(same, ReferencePalm::standard()), Error);
  CHECK_THROWS_AS(kabsch_align(std::span<const Vec3>(same.data(), 5), ReferencePalm::standard()),
                  Error);
}

TEST_CASE("euler angles of simple rotations") {
  CHECK(rotation_to_euler(Mat3::Identity()).norm() < 1e-15);
  const Vec3 e = rotation_to_euler(rot_z(pi / 2));
  CHECK(std::abs(e.x()) < 1e-12);
  CHECK(std::abs(e.y()) < 1e-12);
  CHECK(e.z() == doctest::Approx(pi / 2).epsilon(1e-12));
}

TEST_CASE("euler roundtrip for both conventions") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> a(-pi + 1e-6, pi);
  std::uniform_real_distribution<double> b(-pi / 2 + 0.1, pi / 2 - 0.1);
  for (auto conv : {EulerConvention::XYZ, EulerConvention::ZYX}) {
    double worst = 0;
    for (int i = 0; i < 1000; ++i) {
      const Vec3 angles(a(rng), b(rng), a(rng));
      const Vec3 back = rotation_to_euler(euler_to_rotation(angles, conv), conv);
      worst = std::max(worst, (back - angles).cwiseAbs().maxCoeff());
    }
    CHECK(worst < 1e-9);
  }
}

TEST_CASE("euler XYZ matches the product Rx Ry Rz") {
  const Vec3 angles(0.3, -0.7, 1.1);
  const Mat3 expected = Eigen::AngleAxisd(angles.x(), Vec3::UnitX()).toRotationMatrix() *
                        Eigen::AngleAxisd(angles.y(), Vec3::UnitY()).toRotationMatrix() *
                        Eigen::AngleAxisd(angles.z(), Vec3::UnitZ()).toRotationMatrix();
  CHECK((euler_to_rotation(angles) - expected).norm() < 1e-14);
  const Mat3 zyx = Eigen::AngleAxisd(angles.z(), Vec3::UnitZ()).toRotationMatrix() *
                   Eigen::AngleAxisd(angles.y(), Vec3::UnitY()).toRotationMatrix() *
                   Eigen::AngleAxisd(angles.x(), Vec3::UnitX()).toRotationMatrix();
  CHECK((euler_to_rotation(angles, EulerConvention::ZYX) - zyx).norm() < 1e-14);
}

TEST_CASE("euler decomposition at gimbal lock still reproduces the matrix") {
  for (double ry : {pi / 2, -pi / 2}) {
    const Mat3 r = euler_to_rotation(Vec3(0.4, ry, 0.3));
    const Vec3 e = rotation_to_euler(r);
    CHECK(e.z() == 0.0);
    CHECK((euler_to_rotation(e) - r).norm() < 1e-9);
  }
}

TEST_CASE("rotation_to_euler rejects non-rotations") {
  Mat3 scaled = 1.01 * Mat3::Identity();
  CHECK_THROWS_AS(rotation_to_euler(scaled), Error);
  Mat3 mirror = Mat3::Identity();
  mirror(2, 2) = -1;
  try {
    rotation_to_euler(mirror);
    FAIL("expected NotARotation");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NotARotation);
  }
}

TEST_CASE("cartesian to spherical") {
  const auto z = cartesian_to_spherical(Vec3::Zero());
  CHECK(z.rho == 0.0);
  CHECK(z.theta == 0.0);
  CHECK(z.phi == 0.0);
  const auto up = cartesian_to_spherical(Vec3(0, 0, 1));
  CHECK(up.rho == doctest::Approx(1.0));
  CHECK(up.theta == doctest::Approx(0.0));
  CHECK(up.phi == doctest::Approx(0.0));
  const auto d = cartesian_to_spherical(Vec3(1, 1, 0));
  CHECK(d.rho == doctest::Approx(std::sqrt(2.0)));
  CHECK(d.theta == doctest::Approx(pi / 2));
  CHECK(d.phi == doctest::Approx(pi / 4));
  CHECK(cartesian_to_spherical(Vec3(-1, 0, 0)).phi == doctest::Approx(pi));
}

TEST_CASE("DAD thresholds: anchors and errors") {
  for (int m : {1, 2, 5, 9}) {
    for (double sigma : {0.05, 1.0, 2.0}) {
      const auto eta = dad_thresholds(m, sigma);
      REQUIRE(eta.size() == static_cast<std::size_t>(m));
      CHECK(eta.back() == sigma);
    }
  }
  CHECK(dad_thresholds(1, 2.0)[0] == 2.0);
  CHECK_THROWS_AS(dad_thresholds(0, 1.0), Error);
  CHECK_THROWS_AS(dad_thresholds(5, 0.0), Error);
  CHECK_THROWS_AS(dad_thresholds(5, -1.0), Error);
}

TEST_CASE("DAD thresholds match the closed-form Gaussian mass") {
  const auto eta = dad_thresholds(5, 1.0);
  CHECK(eta[0] == doctest::Approx(0.1720).epsilon(1e-3));
  const double total = testing::gaussian_mass(1.0);
  double prev = 0.0;
  for (std::size_t i = 0; i < eta.size(); ++i) {
    CHECK(eta[i] > prev);
    const double target = static_cast<double>(i + 1) / 5.0 * total;
    CHECK(std::abs(testing::gaussian_mass(eta[i]) - target) < 1e-9);
    prev = eta[i];
  }
  // Scaling sigma scales the thresholds.
  const auto scaled = dad_thresholds(5, 0.06);
  for (std::size_t i = 0; i < eta.size(); ++i) {
    CHECK(scaled[i] == doctest::Approx(0.06 * eta[i]).epsilon(1e-9));
  }
}

TEST_CASE("discretize_rho") {
  const auto cfg = DadConfig::make(5, 1.0);
  CHECK(discretize_rho(0.0, cfg) == 1);
  CHECK(discretize_rho(10.0, cfg) == 5);
  CHECK(discretize_rho(0.5, cfg) == 3);
  CHECK(discretize_rho(cfg.thresholds[1], cfg) == 2);
  int prev = 1;
  for (double rho = 0; rho < 2.0; rho += 0.001) {
    const int b = discretize_rho(rho, cfg);
    CHECK(b >= prev);
    prev = b;
  }
}

TEST_CASE("global features of a static sequence have zero differences") {
  const auto seq = testing::fk_sequence(
      15, [](int) { return RigidPose{Vec3(0.2, 0.1, -0.3), Vec3(0.01, 0.02, 0.3)}; },
      [](int) { return FingerAngles{}; });
  const auto f = global_features(seq, JointLayout{}, ReferencePalm::standard());
  REQUIRE(f.rows() == 15);
  REQUIRE(f.cols() == 30);
  CHECK(f.rightCols(24).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(f(0, 3) == doctest::Approx(0.2));
  CHECK(f(0, 4) == doctest::Approx(0.1));
  CHECK(f(0, 5) == doctest::Approx(-0.3));
}

TEST_CASE("global features follow a constant rotation rate") {
  const auto seq = testing::fk_sequence(
      20, [](int t) { return RigidPose{Vec3(0, 0, 0.01 * t), Vec3(0.01, 0, 0)}; },
      [](int) { return FingerAngles{}; });
  const auto f = global_features(seq, JointLayout{}, ReferencePalm::standard());
  CHECK(f.row(0).segment(6, 6).cwiseAbs().maxCoeff() < 1e-12);
  for (Eigen::Index t = 0; t < 20; ++t) {
    CHECK(f(t, 5) == doctest::Approx(0.01 * t).epsilon(1e-9));
    CHECK(f(t, 11) == doctest::Approx(0.01 * t).epsilon(1e-9));   // offset r_z
    CHECK(f(t, 17) == doctest::Approx(t >= 1 ? 0.01 : 0.0).epsilon(1e-9));
    if (t >= 5) {
      CHECK(f(t, 23) == doctest::Approx(0.05).epsilon(1e-9));
    } else {
      CHECK(f(t, 23) == doctest::Approx(0.01 * t).epsilon(1e-9));  // clamped to the first frame
    }
  }
}

TEST_CASE("global angle differences wrap across the pi boundary") {
  const auto seq = testing::fk_sequence(
      3, [](int t) { return RigidPose{Vec3(0, 0, pi - 0.02 + 0.03 * t), Vec3::Zero()}; },
      [](int) { return FingerAngles{}; });
  const auto f = global_features(seq, JointLayout{}, ReferencePalm::standard());
  CHECK(f(1, 17) == doctest::Approx(0.03).epsilon(1e-9));
  CHECK(f(2, 11) == doctest::Approx(0.06).epsilon(1e-9));
}

TEST_CASE("global rho bin uses the world or first-frame origin") {
  const auto seq = testing::fk_sequence(
      5, [](int t) { return RigidPose{Vec3::Zero(), Vec3(0.5 + 0.01 * t, 0, 0)}; },
      [](int) { return FingerAngles{}; });
  GlobalMotionOptions world;
  const auto fw = global_features(seq, JointLayout{}, ReferencePalm::standard(), world);
  CHECK(fw(0, 0) == 5.0);
  GlobalMotionOptions first;
  first.rho_reference = RhoReference::FirstFrame;
  const auto ff = global_features(seq, JointLayout{}, ReferencePalm::standard(), first);
  CHECK(ff(0, 0) == 1.0);
  CHECK(ff(4, 0) >= 1.0);
}

TEST_CASE("global features report the failing frame") {
  auto seq = testing::fk_sequence(
      4, [](int) { return RigidPose{}; }, [](int) { return FingerAngles{}; });
  for (auto& j : seq.frames[2].joints) {
    j = Vec3(0.1, 0.1, 0.1);
  }
  try {
    global_features(seq, JointLayout{}, ReferencePalm::standard());
    FAIL("expected DegenerateInput");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::DegenerateInput);
    CHECK(e.where() == 2);
  }
}

TEST_CASE("temporal features clamp lags and honor custom lag sets") {
  FeatureMatrix base(4, 2);
  base << 1, 0.1, 2, 0.2, 4, 0.4, 8, 0.8;
  const std::vector<int> lags{1, 2};
  std::array<bool, 2> ang{false, true};
  const auto f = temporal_pose_features(base, lags, ang);
  REQUIRE(f.cols() == 8);
  CHECK(f(3, 2) == 7);      // offset
  CHECK(f(3, 4) == 4);      // lag 1
  CHECK(f(3, 6) == 6);      // lag 2
  CHECK(f(1, 6) == 1);      // lag 2 clamped to the first frame
  CHECK(f(0, 4) == 0);
  CHECK(global_feature_dims() == 30);
  GlobalMotionOptions o;
  o.lags = {1, 2, 3, 4};
  CHECK(global_feature_dims(o) == 36);
  const std::vector<int> bad{0};
  CHECK_THROWS_AS(temporal_pose_features(base, bad, ang), Error);
}

TEST_CASE("wrap_angle maps into (-pi, pi]") {
  CHECK(wrap_angle(pi) == doctest::Approx(pi));
  CHECK(wrap_angle(-pi) == doctest::Approx(pi));
  CHECK(wrap_angle(3 * pi / 2) == doctest::Approx(-pi / 2));
  CHECK(wrap_angle(-7.0) == doctest::Approx(-7.0 + 2 * pi));
}
