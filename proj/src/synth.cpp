#include "hgr/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <random>
#include <sstream>

#include <Eigen/Geometry>

#include "hgr/config.hpp"
#include "hgr/error.hpp"
#include "hgr/rng.hpp"

namespace hgr {

namespace fs = std::filesystem;

HandTemplate HandTemplate::scaled(double factor) const {
  HandTemplate out = *this;
  for (auto& p : out.palm.points) {
    p *= factor;
  }
  for (auto& finger : out.bone_lengths) {
    for (double& len : finger) {
      len *= factor;
    }
  }
  return out;
}

std::vector<Vec3> HandTemplate::rest_pose() const {
  FingerAngles zero{};
  return forward_kinematics(*this, RigidPose{}, zero).joints;
}

HandSkeleton forward_kinematics(const HandTemplate& hand, const RigidPose& pose,
                                const FingerAngles& angles, EulerConvention convention) {
  const JointLayout& layout = hand.layout;
  const auto rest = finger_rest_frames(hand.palm);
  const Mat3 world_rot = euler_to_rotation(pose.rotation, convention);

  std::vector<Vec3> local(static_cast<std::size_t>(layout.joint_count), hand.palm.points[1]);
  local[static_cast<std::size_t>(layout.wrist)] = hand.palm.points[0];
  local[static_cast<std::size_t>(layout.palm)] = hand.palm.points[1];
  for (int f = 0; f < kFingerCount; ++f) {
    const auto fi = static_cast<std::size_t>(f);
    const auto& fj = layout.fingers[fi];
    const auto& len = hand.bone_lengths[fi];
    Mat3 bone = rest[fi].basis() *
                Eigen::AngleAxisd(angles[dof_index(f, kMcpAbduction)], Vec3::UnitZ()) *
                Eigen::AngleAxisd(angles[dof_index(f, kMcpFlexion)], Vec3::UnitX());
    Vec3 p = hand.palm.points[2 + fi];
    local[static_cast<std::size_t>(fj.base)] = p;
    p += len[0] * bone.col(1);
    local[static_cast<std::size_t>(fj.pip)] = p;
    bone = bone * Eigen::AngleAxisd(angles[dof_index(f, kPipFlexion)], Vec3::UnitX());
    p += len[1] * bone.col(1);
    local[static_cast<std::size_t>(fj.dip)] = p;
    bone = bone * Eigen::AngleAxisd(angles[dof_index(f, kDipFlexion)], Vec3::UnitX());
    p += len[2] * bone.col(1);
    local[static_cast<std::size_t>(fj.tip)] = p;
  }
  HandSkeleton out;
  out.joints.reserve(local.size());
  for (const auto& p : local) {
    out.joints.push_back(world_rot * p + pose.translation);
  }
  return out;
}

double Curve::at(double u) const {
  if (points.empty()) {
    return 0.0;
  }
  if (u <= points.front().first) {
    return points.front().second;
  }
  if (u >= points.back().first) {
    return points.back().second;
  }
  const auto hi = std::upper_bound(points.begin(), points.end(), u,
                                   [](double x, const auto& p) { return x < p.first; });
  const auto lo = hi - 1;
  const double span = hi->first - lo->first;
  if (span <= 0.0) {
    return hi->second;
  }
  const double w = (u - lo->first) / span;
  return (1.0 - w) * lo->second + w * hi->second;
}

namespace {

Curve parse_curve(const std::string& text, int line_no) {
  Curve c;
  std::istringstream in(text);
  std::string token;
  while (in >> token) {
    const auto colon = token.find(':');
    if (colon == std::string::npos) {
      throw Error(Errc::ParseError, "curve point must be u:value (line " +
                                        std::to_string(line_no) + ")", line_no);
    }
    char* e1 = nullptr;
    char* e2 = nullptr;
    const std::string us = token.substr(0, colon);
    const std::string vs = token.substr(colon + 1);
    const double u = std::strtod(us.c_str(), &e1);
    const double v = std::strtod(vs.c_str(), &e2);
    if (us.empty() || vs.empty() || *e1 != '\0' || *e2 != '\0') {
      throw Error(Errc::ParseError, "bad curve point '" + token + "'", line_no);
    }
    if (!c.points.empty() && u < c.points.back().first) {
      throw Error(Errc::ParseError, "curve points must be sorted by u", line_no);
    }
    c.points.emplace_back(u, v);
  }
  return c;
}

int parse_int_value(const std::string& text, int line_no) {
  char* end = nullptr;
  const long v = std::strtol(text.c_str(), &end, 10);
  if (text.empty() || *end != '\0') {
    throw Error(Errc::ParseError, "expected integer, got '" + text + "'", line_no);
  }
  return static_cast<int>(v);
}

void assign_curve(GestureScript& s, const std::string& key, const Curve& curve, int line_no) {
  static const std::map<std::string, int> kPose{{"rx", 0}, {"ry", 1}, {"rz", 2},
                                               {"tx", 3}, {"ty", 4}, {"tz", 5}};
  if (auto it = kPose.find(key); it != kPose.end()) {
    s.pose[static_cast<std::size_t>(it->second)] = curve;
    return;
  }
  const auto dot = key.find('.');
  if (dot == std::string::npos) {
    throw Error(Errc::ParseError, "unknown script key '" + key + "'", line_no);
  }
  static const std::map<std::string, int> kFingers{
      {"thumb", 0}, {"index", 1}, {"middle", 2}, {"ring", 3}, {"pinky", 4}, {"all", -1}};
  static const std::map<std::string, std::vector<FingerDof>> kDofs{
      {"mcp_flex", {kMcpFlexion}},
      {"mcp_abd", {kMcpAbduction}},
      {"pip", {kPipFlexion}},
      {"dip", {kDipFlexion}},
      {"flex", {kMcpFlexion, kPipFlexion, kDipFlexion}}};
  const auto fit = kFingers.find(key.substr(0, dot));
  const auto dit = kDofs.find(key.substr(dot + 1));
  if (fit == kFingers.end() || dit == kDofs.end()) {
    throw Error(Errc::ParseError, "unknown script key '" + key + "'", line_no);
  }
  for (const auto& pt : curve.points) {
    if (std::abs(pt.second) > 1.2) {
      throw Error(Errc::InvalidConfig, "finger angle curves must stay within [-1.2, 1.2]",
                  line_no);
    }
  }
  for (int f = 0; f < kFingerCount; ++f) {
    if (fit->second >= 0 && fit->second != f) {
      continue;
    }
    for (FingerDof d : dit->second) {
      s.angles[dof_index(f, d)] = curve;
    }
  }
}

}  // namespace

std::vector<GestureScript> parse_scripts(std::istream& in) {
  std::vector<GestureScript> scripts;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    line = trim(line);
    if (line.empty()) {
      continue;
    }
    if (line == "[script]") {
      scripts.emplace_back();
      continue;
    }
    if (scripts.empty()) {
      throw Error(Errc::ParseError, "key outside a [script] section", line_no);
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(Errc::ParseError, "expected key = value", line_no);
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    GestureScript& s = scripts.back();
    if (key == "name") {
      s.name = value;
    } else if (key == "gesture") {
      s.gesture = parse_int_value(value, line_no);
    } else if (key == "finger") {
      s.finger = parse_int_value(value, line_no);
    } else if (key == "frames") {
      std::istringstream fr(value);
      std::string a, b;
      fr >> a >> b;
      s.min_frames = parse_int_value(a, line_no);
      s.max_frames = b.empty() ? s.min_frames : parse_int_value(b, line_no);
    } else {
      assign_curve(s, key, parse_curve(value, line_no), line_no);
    }
  }
  for (const auto& s : scripts) {
    if (s.gesture < 1 || s.gesture > 14 || s.finger < 1 || s.finger > 2) {
      throw Error(Errc::InvalidConfig, "script '" + s.name + "': gesture/finger out of range");
    }
    if (s.min_frames < 2 || s.max_frames < s.min_frames) {
      throw Error(Errc::InvalidConfig, "script '" + s.name + "': bad frame range");
    }
  }
  return scripts;
}

const std::string& builtin_script_text() {
  static const std::string kText = R"(# Built-in synthetic gesture archetypes (gesture ids follow DHG-14).
[script]
name = grab
gesture = 1
frames = 30 42
all.flex = 0:0 0.6:1.0 1:1.0
tz = 0:0 1:0.05

[script]
name = tap
gesture = 2
frames = 26 36
index.flex = 0:0 0.5:0.9 1:0
tz = 0:0 0.5:-0.03 1:0

[script]
name = pinch
gesture = 4
frames = 30 42
thumb.flex = 0:0 0.6:0.9 1:0.9
index.flex = 0:0 0.6:0.9 1:0.9
middle.flex = 0:0 1:0.35
ring.flex = 0:0 1:0.35
pinky.flex = 0:0 1:0.35
tz = 0:0 1:0.02

[script]
name = rotation_cw
gesture = 5
frames = 30 42
rz = 0:0 1:-1.2
all.flex = 0:0.2 1:0.2

[script]
name = swipe_right
gesture = 7
frames = 26 36
tx = 0:-0.08 1:0.08

[script]
name = shake
gesture = 14
frames = 30 42
rz = 0:0 0.2:0.4 0.4:-0.4 0.6:0.4 0.8:-0.4 1:0
)";
  return kText;
}

std::vector<GestureScript> builtin_scripts() {
  std::istringstream in(builtin_script_text());
  return parse_scripts(in);
}

namespace {

/// One-finger variant: all fingers but the index held curled.
GestureScript one_finger_variant(GestureScript s) {
  s.finger = 1;
  const Curve curled{{{0.0, 1.0}}};
  for (int f = 0; f < kFingerCount; ++f) {
    if (f == static_cast<int>(Finger::Index)) {
      continue;
    }
    for (FingerDof d : {kMcpFlexion, kPipFlexion, kDipFlexion}) {
      s.angles[dof_index(f, d)] = curled;
    }
  }
  return s;
}

struct SubjectStyle {
  double amplitude;
  double speed;
  double hand_size;
  Vec3 position;
  Vec3 orientation;
  FingerAngles rest_curl;
};

SubjectStyle draw_subject(const SynthOptions& o, int subject) {
  std::mt19937_64 rng(derive_seed(o.seed, {0x5b, static_cast<std::uint64_t>(subject)}));
  auto uniform = [&](double j) { return std::uniform_real_distribution<double>(1.0 - j, 1.0 + j)(rng); };
  std::normal_distribution<double> pos(0.0, o.position_spread);
  std::normal_distribution<double> ori(0.0, o.orientation_spread);
  std::uniform_real_distribution<double> curl(0.0, 0.15);
  SubjectStyle s;
  s.amplitude = uniform(o.amplitude_jitter);
  s.speed = uniform(o.speed_jitter);
  s.hand_size = uniform(o.hand_size_jitter);
  s.position = Vec3(pos(rng), pos(rng), pos(rng));
  s.orientation = Vec3(ori(rng), ori(rng), ori(rng));
  for (double& c : s.rest_curl) {
    c = curl(rng);
  }
  for (int f = 0; f < kFingerCount; ++f) {
    s.rest_curl[dof_index(f, kMcpAbduction)] = 0.0;
  }
  return s;
}

SkeletonSequence synthesize(const GestureScript& script, const SubjectStyle& style,
                            const HandTemplate& hand, const SynthOptions& o, int subject,
                            int trial, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> frames_dist(script.min_frames, script.max_frames);
  std::uniform_real_distribution<double> warp_dist(0.8, 1.25);
  std::normal_distribution<double> noise(0.0, o.noise_sigma);

  const int frames = std::max(2, static_cast<int>(std::lround(frames_dist(rng) / style.speed)));
  const double warp = warp_dist(rng);
  const HandTemplate sized = hand.scaled(style.hand_size);

  SkeletonSequence seq;
  seq.info = {subject, script.gesture, script.finger, trial};
  seq.frames.reserve(static_cast<std::size_t>(frames));
  for (int t = 0; t < frames; ++t) {
    const double u = std::pow(static_cast<double>(t) / (frames - 1), warp);
    RigidPose pose;
    for (int k = 0; k < 3; ++k) {
      pose.rotation[k] = style.orientation[k] + style.amplitude * script.pose[static_cast<std::size_t>(k)].at(u);
      pose.translation[k] =
          style.position[k] + style.amplitude * script.pose[static_cast<std::size_t>(3 + k)].at(u);
    }
    FingerAngles angles;
    for (std::size_t k = 0; k < angles.size(); ++k) {
      angles[k] = std::clamp(style.rest_curl[k] + style.amplitude * script.angles[k].at(u), -1.2, 1.2);
    }
    HandSkeleton frame = forward_kinematics(sized, pose, angles, o.euler);
    if (o.noise_sigma > 0.0) {
      for (auto& p : frame.joints) {
        p += Vec3(noise(rng), noise(rng), noise(rng));
      }
    }
    seq.frames.push_back(std::move(frame));
  }
  return seq;
}

}  // namespace

std::vector<SkeletonSequence> generate_dataset(const std::vector<GestureScript>& scripts,
                                               const SynthOptions& options,
                                               const HandTemplate& hand) {
  if (scripts.size() < 2) {
    throw Error(Errc::InvalidConfig, "need at least two gesture scripts");
  }
  if (options.subjects < 1 || options.trials < 1 || options.finger_configs < 1 ||
      options.finger_configs > 2 || options.noise_sigma < 0.0) {
    throw Error(Errc::InvalidConfig, "invalid synthetic dataset options");
  }
  std::vector<GestureScript> variants;
  for (const auto& s : scripts) {
    if (options.finger_configs == 2) {
      variants.push_back(one_finger_variant(s));
      GestureScript whole = s;
      whole.finger = 2;
      variants.push_back(std::move(whole));
    } else {
      variants.push_back(s);
    }
  }
  std::vector<SubjectStyle> styles;
  for (int s = 1; s <= options.subjects; ++s) {
    styles.push_back(draw_subject(options, s));
  }
  std::vector<SkeletonSequence> out;
  out.reserve(variants.size() * static_cast<std::size_t>(options.subjects * options.trials));
  for (std::size_t v = 0; v < variants.size(); ++v) {
    for (int s = 1; s <= options.subjects; ++s) {
      for (int t = 1; t <= options.trials; ++t) {
        const std::uint64_t seed = derive_seed(
            options.seed, {static_cast<std::uint64_t>(v), static_cast<std::uint64_t>(s),
                           static_cast<std::uint64_t>(t)});
        out.push_back(synthesize(variants[v], styles[static_cast<std::size_t>(s - 1)], hand,
                                 options, s, t, seed));
      }
    }
  }
  return out;
}

void export_dhg_tree(const std::vector<SkeletonSequence>& sequences, const fs::path& root) {
  std::error_code ec;
  fs::create_directories(root, ec);
  if (ec) {
    throw Error(Errc::IoError, "cannot create " + root.string() + ": " + ec.message());
  }
  for (const auto& seq : sequences) {
    const auto& i = seq.info;
    const fs::path dir = root / ("gesture_" + std::to_string(i.gesture)) /
                         ("finger_" + std::to_string(i.finger)) /
                         ("subject_" + std::to_string(i.subject)) /
                         ("essai_" + std::to_string(i.trial));
    fs::create_directories(dir, ec);
    if (ec) {
      throw Error(Errc::IoError, "cannot create " + dir.string() + ": " + ec.message());
    }
    std::ofstream out(dir / "skeletons_world.txt");
    if (!out) {
      throw Error(Errc::IoError, "cannot write " + (dir / "skeletons_world.txt").string());
    }
    out << std::setprecision(9);
    for (const auto& frame : seq.frames) {
      bool first = true;
      for (const auto& p : frame.joints) {
        for (int k = 0; k < 3; ++k) {
          out << (first ? "" : " ") << p[k];
          first = false;
        }
      }
      out << '\n';
    }
    if (!out) {
      throw Error(Errc::IoError, "write failed under " + dir.string());
    }
  }
}

}  // namespace hgr
