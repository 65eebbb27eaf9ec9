#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <set>

#include "helpers.hpp"
#include "hgr/error.hpp"
#include "hgr/skeleton.hpp"

using namespace hgr;

namespace {

SkeletonSequence rest_sequence(int frames) {
  SkeletonSequence seq;
  const auto joints = HandTemplate::standard().rest_pose();
  for (int t = 0; t < frames; ++t) {
    seq.frames.push_back({joints});
  }
  return seq;
}

/// Frame with the palm at the origin and the five bases at given distances.
HandSkeleton palm_frame(const std::array<double, 5>& distances) {
  HandSkeleton f;
  f.joints.assign(22, Vec3::Zero());
  const JointLayout layout;
  f.joints[static_cast<std::size_t>(layout.wrist)] = Vec3(0, -0.08, 0);
  for (int i = 0; i < 5; ++i) {
    const double a = 0.3 * (i - 2);
    f.joints[static_cast<std::size_t>(layout.fingers[static_cast<std::size_t>(i)].base)] =
        distances[static_cast<std::size_t>(i)] * Vec3(std::sin(a), std::cos(a), 0);
  }
  return f;
}

}  // namespace

TEST_CASE("default layout is the DHG skeleton") {
  const JointLayout layout;
  CHECK_NOTHROW(layout.validate());
  CHECK(layout.joint_count == 22);
  const auto palm = layout.palm_joints();
  CHECK(palm[0] == 0);
  CHECK(palm[1] == 1);
  CHECK(palm[2] == 2);
  CHECK(palm[6] == 18);
}

TEST_CASE("layout validation rejects collisions and out-of-range indices") {
  JointLayout dup;
  dup.fingers[1].tip = dup.fingers[2].base;
  CHECK_THROWS_AS(dup.validate(), Error);
  JointLayout out;
  out.fingers[4].tip = 22;
  try {
    out.validate();
    FAIL("expected InvalidLayout");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::InvalidLayout);
  }
}

TEST_CASE("validate_sequence accepts well-formed input unchanged") {
  const auto seq = rest_sequence(5);
  CHECK(&validate_sequence(seq, JointLayout{}) == &seq);
}

TEST_CASE("validate_sequence reports the first non-finite coordinate") {
  auto seq = rest_sequence(6);
  seq.frames[3].joints[7].y() = std::numeric_limits<double>::quiet_NaN();
  seq.frames[5].joints[2].x() = std::numeric_limits<double>::infinity();
  try {
    validate_sequence(seq, JointLayout{});
    FAIL("expected NonFiniteCoordinate");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NonFiniteCoordinate);
    CHECK(e.where() == 3);
    CHECK(e.detail() == 7);
  }
}

TEST_CASE("validate_sequence reports a wrong joint count") {
  auto seq = rest_sequence(4);
  seq.frames[2].joints.pop_back();
  try {
    validate_sequence(seq, JointLayout{});
    FAIL("expected WrongJointCount");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::WrongJointCount);
    CHECK(e.where() == 2);
    CHECK(e.detail() == 21);
  }
}

TEST_CASE("palm_radius is the mean palm-to-base distance") {
  const JointLayout layout;
  CHECK(palm_radius(palm_frame({0.04, 0.04, 0.04, 0.04, 0.04}), layout) ==
        doctest::Approx(0.04).epsilon(1e-12));
  CHECK(palm_radius(palm_frame({0.03, 0.04, 0.05, 0.04, 0.04}), layout) ==
        doctest::Approx((0.03 + 0.04 + 0.05 + 0.04 + 0.04) / 5).epsilon(1e-12));
  try {
    palm_radius(palm_frame({0, 0, 0, 0, 0}), layout);
    FAIL("expected DegeneratePalm");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::DegeneratePalm);
  }
}

TEST_CASE("palm_radius is invariant under rigid motion") {
  std::mt19937_64 rng(11);
  const JointLayout layout;
  const HandSkeleton f{HandTemplate::standard().rest_pose()};
  const double r0 = palm_radius(f, layout);
  for (int i = 0; i < 50; ++i) {
    const auto moved = testing::rigid(f, testing::random_rotation(rng), testing::random_vec(rng, 2));
    CHECK(std::abs(palm_radius(moved, layout) - r0) < 1e-12);
  }
}

TEST_CASE("skeleton normalization maps the farthest joint to unit norm") {
  SkeletonSequence seq;
  HandSkeleton f;
  f.joints.assign(22, Vec3::Zero());
  for (int j = 2; j < 22; ++j) {
    f.joints[static_cast<std::size_t>(j)] = Vec3(0.01 * (j % 3), 0.005 * (j % 5), 0.01);
  }
  f.joints[9] = Vec3(0, 0, 0.2);
  seq.frames.assign(3, f);
  const auto out = normalize_skeleton_branch(seq, JointLayout{});
  REQUIRE(out.rows() == 3);
  REQUIRE(out.cols() == 66);
  CHECK(out(1, 27) == doctest::Approx(0.0));
  CHECK(out(1, 28) == doctest::Approx(0.0));
  CHECK(out(1, 29) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("skeleton normalization has unit max norm and ignores translation") {
  std::mt19937_64 rng(5);
  const auto seq = testing::fk_sequence(
      12,
      [&](int t) {
        RigidPose p;
        p.rotation = Vec3(0.1 * t, -0.05 * t, 0.02 * t);
        p.translation = Vec3(0.01 * t, 0.3, -0.02 * t);
        return p;
      },
      [&](int) { return testing::random_angles(rng, 0.8); });
  const auto out = normalize_skeleton_branch(seq, JointLayout{});
  double max_norm = 0;
  for (Eigen::Index t = 0; t < out.rows(); ++t) {
    for (Eigen::Index j = 0; j < 22; ++j) {
      max_norm = std::max(max_norm, out.row(t).segment<3>(3 * j).norm());
    }
  }
  CHECK(max_norm == doctest::Approx(1.0).epsilon(1e-14));

  SkeletonSequence shifted = seq;
  for (auto& f : shifted.frames) {
    f = testing::rigid(f, Mat3::Identity(), Vec3(3.0, -1.5, 0.25));
  }
  const auto out2 = normalize_skeleton_branch(shifted, JointLayout{});
  CHECK((out - out2).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("skeleton normalization rejects a collapsed sequence") {
  SkeletonSequence seq;
  HandSkeleton f;
  f.joints.assign(22, Vec3(1, 2, 3));
  seq.frames.assign(4, f);
  try {
    normalize_skeleton_branch(seq, JointLayout{});
    FAIL("expected ZeroAmplitude");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::ZeroAmplitude);
  }
}

TEST_CASE("28-class labels are a bijection with (gesture, finger)") {
  std::set<int> seen;
  for (int g = 1; g <= 14; ++g) {
    for (int f = 1; f <= 2; ++f) {
      const GestureLabel l{g, f};
      const int id = l.gesture_28();
      CHECK(id == 2 * (g - 1) + f);
      const auto back = GestureLabel::from_28(id);
      CHECK(back.gesture_14 == g);
      CHECK(back.finger_config == f);
      seen.insert(id);
    }
  }
  CHECK(seen.size() == 28);
  CHECK(*seen.begin() == 1);
  CHECK(*seen.rbegin() == 28);
  CHECK_THROWS_AS((GestureLabel{15, 1}.gesture_28()), Error);
  CHECK_THROWS_AS((GestureLabel{3, 3}.gesture_28()), Error);
  CHECK_THROWS_AS(GestureLabel::from_28(0), Error);
  CHECK_THROWS_AS(GestureLabel::from_28(29), Error);
}
