// Copyright 2026 The sqpcd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sqpcd/scene_io.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "sqpcd/random.h"

namespace sqpcd {
namespace {

// Field path plus the yaml node, so every error names its location.
class Field {
 public:
  Field(YAML::Node node, std::string path, const std::string* source)
      : node_(std::move(node)), path_(std::move(path)), source_(source) {}

  [[noreturn]] void Fail(const std::string& what) const {
    std::ostringstream msg;
    msg << *source_;
    if (node_.IsDefined() && node_.Mark().line >= 0) {
      msg << ":" << node_.Mark().line + 1;
    }
    msg << ": field '" << path_ << "': " << what;
    throw InputError(msg.str());
  }

  const YAML::Node& node() const { return node_; }
  const std::string& path() const { return path_; }

  bool Has(const std::string& key) const { return node_[key].IsDefined(); }

  Field Child(const std::string& key) const {
    const YAML::Node child = node_[key];
    Field f(child, path_.empty() ? key : path_ + "." + key, source_);
    if (!child.IsDefined()) {
      Field(node_, f.path_, source_).Fail("missing required field");
    }
    return f;
  }

  Field At(std::size_t i) const {
    return Field(node_[i], path_ + "[" + std::to_string(i) + "]", source_);
  }

  std::size_t Size() const { return node_.size(); }

  void RequireMap(const std::set<std::string>& allowed) const {
    if (!node_.IsMap()) Fail("expected a mapping");
    for (const auto& kv : node_) {
      const std::string key = kv.first.as<std::string>();
      if (!allowed.count(key)) {
        Field(kv.first, path_.empty() ? key : path_ + "." + key, source_)
            .Fail("unknown field");
      }
    }
  }

  void RequireSequence() const {
    if (!node_.IsSequence()) Fail("expected a list");
  }

  double Number() const {
    if (!node_.IsScalar()) Fail("expected a number");
    try {
      const double v = node_.as<double>();
      if (!std::isfinite(v)) Fail("expected a finite number");
      return v;
    } catch (const YAML::Exception&) {
      Fail("expected a number, got '" + node_.Scalar() + "'");
    }
  }

  long long Integer() const {
    if (!node_.IsScalar()) Fail("expected an integer");
    try {
      return node_.as<long long>();
    } catch (const YAML::Exception&) {
      Fail("expected an integer, got '" + node_.Scalar() + "'");
    }
  }

  std::string String() const {
    if (!node_.IsScalar()) Fail("expected a string");
    return node_.Scalar();
  }

  std::vector<double> Numbers(std::size_t count) const {
    RequireSequence();
    if (node_.size() != count) {
      Fail("expected " + std::to_string(count) + " numbers, got " +
           std::to_string(node_.size()));
    }
    std::vector<double> out;
    for (std::size_t i = 0; i < count; ++i) out.push_back(At(i).Number());
    return out;
  }

  Vec3 Vector3() const {
    const auto v = Numbers(3);
    return Vec3(v[0], v[1], v[2]);
  }

  Mat3 Quaternion() const {
    const auto q = Numbers(4);
    const double norm = std::sqrt(q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + q[3] * q[3]);
    if (std::abs(norm - 1.0) > 1e-3) {
      Fail("expected a unit quaternion (w, x, y, z)");
    }
    return QuaternionToRotation(q[0], q[1], q[2], q[3]);
  }

 private:
  YAML::Node node_;
  std::string path_;
  const std::string* source_;
};

template <class F>
auto Guarded(const Field& f, F&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const std::invalid_argument& e) {
    f.Fail(e.what());
  }
}

Superquadric ParseSuperquadric(const Field& f) {
  f.RequireMap({"a", "eps"});
  const Vec3 a = f.Child("a").Vector3();
  const auto eps = f.Child("eps").Numbers(2);
  return Guarded(f, [&] { return Superquadric(a, Vec2(eps[0], eps[1])); });
}

Mat3 ParseCovariance(const Field& f) {
  if (f.node().IsSequence()) {
    const auto v = f.Numbers(9);
    Mat3 m;
    for (int i = 0; i < 9; ++i) m(i / 3, i % 3) = v[i];
    return m;
  }
  f.RequireMap({"diag", "full"});
  if (f.Has("diag") == f.Has("full")) {
    f.Fail("give exactly one of 'diag' or 'full'");
  }
  if (f.Has("diag")) return f.Child("diag").Vector3().asDiagonal();
  return ParseCovariance(f.Child("full"));
}

Obstacle ParseObject(const Field& f) {
  f.RequireMap({"name", "superquadric", "position", "covariance", "rotation",
                "rotation_samples", "rotation_noise", "enlargement_c"});
  Obstacle o;
  o.name = f.Child("name").String();
  o.body.shape = ParseSuperquadric(f.Child("superquadric"));
  o.body.belief.position.mean = f.Child("position").Vector3();
  if (f.Has("covariance")) o.body.belief.position.cov = ParseCovariance(f.Child("covariance"));
  const Mat3 mean_rotation = f.Has("rotation") ? f.Child("rotation").Quaternion()
                                               : Mat3::Identity();
  if (f.Has("rotation_samples") && f.Has("rotation_noise")) {
    f.Fail("give at most one of 'rotation_samples' or 'rotation_noise'");
  }
  std::vector<Mat3> samples;
  if (f.Has("rotation_samples")) {
    if (f.Has("rotation")) f.Fail("'rotation' is implied by 'rotation_samples'");
    const Field list = f.Child("rotation_samples");
    list.RequireSequence();
    if (list.Size() == 0) list.Fail("expected at least one quaternion");
    for (std::size_t i = 0; i < list.Size(); ++i) samples.push_back(list.At(i).Quaternion());
  } else if (f.Has("rotation_noise")) {
    const Field noise = f.Child("rotation_noise");
    noise.RequireMap({"sigma_deg", "count", "seed"});
    const double sigma = noise.Child("sigma_deg").Number();
    const long long count = noise.Child("count").Integer();
    const long long seed = noise.Child("seed").Integer();
    if (sigma < 0 || sigma > 45) noise.Child("sigma_deg").Fail("must lie in [0, 45]");
    if (count < 1) noise.Child("count").Fail("must be >= 1");
    samples = GenerateRotationSamples(mean_rotation, sigma * M_PI / 180.0,
                                      static_cast<int>(count),
                                      static_cast<std::uint64_t>(seed));
  } else {
    samples = {mean_rotation};
  }
  Guarded(f, [&] {
    o.body.belief.rotation = samples.size() == 1
                                 ? RotationBelief::Exact(samples.front())
                                 : RotationBelief::FromSamples(samples);
    return 0;
  });
  if (f.Has("enlargement_c")) o.body.enlargement_c = f.Child("enlargement_c").Number();
  Guarded(f, [&] {
    o.body.Validate();
    return 0;
  });
  return o;
}

KinematicChain ParseChain(const Field& f) {
  if (f.node().IsScalar()) {
    if (f.String() == "three_dof_arm") return KinematicChain::ThreeDofArm();
    f.Fail("unknown chain preset '" + f.String() + "'");
  }
  f.RequireMap({"base_position", "base_rotation", "links"});
  Pose base;
  if (f.Has("base_position")) base.translation = f.Child("base_position").Vector3();
  if (f.Has("base_rotation")) base.rotation = f.Child("base_rotation").Quaternion();
  const Field list = f.Child("links");
  list.RequireSequence();
  std::vector<ChainLink> links;
  for (std::size_t i = 0; i < list.Size(); ++i) {
    const Field l = list.At(i);
    l.RequireMap({"bound", "bound_position", "bound_rotation", "joint_axis",
                  "joint_origin", "parent", "limits"});
    ChainLink link;
    link.bound = ParseSuperquadric(l.Child("bound"));
    if (l.Has("bound_position")) link.bound_offset.translation = l.Child("bound_position").Vector3();
    if (l.Has("bound_rotation")) link.bound_offset.rotation = l.Child("bound_rotation").Quaternion();
    link.joint_axis = l.Child("joint_axis").Vector3();
    if (l.Has("joint_origin")) link.joint_origin = l.Child("joint_origin").Vector3();
    link.parent = static_cast<int>(l.Has("parent") ? l.Child("parent").Integer()
                                                   : static_cast<long long>(i) - 1);
    const auto limits = l.Child("limits").Numbers(2);
    link.lower = limits[0];
    link.upper = limits[1];
    links.push_back(link);
  }
  return Guarded(f, [&] { return KinematicChain(std::move(links), base); });
}

JointVector ParseJoints(const Field& f) {
  f.RequireSequence();
  JointVector q(static_cast<Eigen::Index>(f.Size()));
  for (std::size_t i = 0; i < f.Size(); ++i) q[static_cast<Eigen::Index>(i)] = f.At(i).Number();
  return q;
}

}  // namespace

std::vector<Mat3> GenerateRotationSamples(const Mat3& mean, double sigma_rad,
                                          int count, std::uint64_t seed) {
  Rng rng = MakeRng(seed);
  std::vector<Mat3> samples;
  samples.reserve(count);
  for (int i = 0; i < count; ++i) {
    samples.push_back(mean * ExpSO3(sigma_rad * StandardNormal3(rng)));
  }
  return samples;
}

Scene ParseScene(const std::string& text, const std::string& source) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw InputError(source + ":" + std::to_string(e.mark.line + 1) +
                     ": malformed document: " + e.msg);
  }
  const Field f(root, "", &source);
  f.RequireMap({"version", "objects", "chain", "start", "goal", "delta", "seed"});
  const long long version = f.Child("version").Integer();
  if (version != kSceneFormatVersion) {
    f.Child("version").Fail("unsupported version " + std::to_string(version));
  }
  Scene scene;
  if (f.Has("objects")) {
    const Field list = f.Child("objects");
    list.RequireSequence();
    std::set<std::string> names;
    for (std::size_t i = 0; i < list.Size(); ++i) {
      Obstacle o = ParseObject(list.At(i));
      if (!names.insert(o.name).second) {
        list.At(i).Child("name").Fail("duplicate object name '" + o.name + "'");
      }
      scene.obstacles.push_back(std::move(o));
    }
  }
  if (f.Has("chain")) scene.chain = ParseChain(f.Child("chain"));
  scene.start = f.Has("start") ? ParseJoints(f.Child("start"))
                               : JointVector::Zero(scene.chain.dof());
  scene.goal = f.Has("goal") ? ParseJoints(f.Child("goal")) : scene.start;
  if (f.Has("delta")) scene.delta = f.Child("delta").Number();
  if (f.Has("seed")) scene.seed = static_cast<std::uint64_t>(f.Child("seed").Integer());
  if (!(scene.delta > 0.0 && scene.delta < 1.0)) f.Child("delta").Fail("must lie in (0, 1)");
  if (!scene.chain.WithinLimits(scene.start)) {
    f.Child("start").Fail("needs " + std::to_string(scene.chain.dof()) +
                          " joint values within the joint limits");
  }
  if (!scene.chain.WithinLimits(scene.goal)) {
    f.Child("goal").Fail("needs " + std::to_string(scene.chain.dof()) +
                         " joint values within the joint limits");
  }
  return scene;
}

Scene LoadScene(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path + ": cannot open scene file");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseScene(buffer.str(), path);
}

void WritePaths(std::ostream& out, const std::map<int, Path>& paths) {
  int dof = -1;
  for (const auto& [id, path] : paths) {
    for (const JointVector& q : path.waypoints) {
      if (dof < 0) dof = static_cast<int>(q.size());
      if (q.size() != dof) throw std::invalid_argument("paths mix joint counts");
    }
  }
  out << "path_id,waypoint_index";
  for (int k = 0; k < std::max(dof, 0); ++k) out << ",q" << k;
  out << "\n";
  for (const auto& [id, path] : paths) {
    for (std::size_t w = 0; w < path.waypoints.size(); ++w) {
      out << id << "," << w;
      for (int k = 0; k < dof; ++k) {
        // Shortest text that reads back to the same double.
        char buffer[32];
        const auto end = std::to_chars(buffer, buffer + sizeof(buffer), path.waypoints[w][k]).ptr;
        out << "," << std::string_view(buffer, end - buffer);
      }
      out << "\n";
    }
  }
}

std::map<int, Path> ReadPaths(std::istream& in, const std::string& source) {
  std::string line;
  int line_no = 1;
  auto fail = [&](const std::string& what) -> void {
    throw InputError(source + ":" + std::to_string(line_no) + ": " + what);
  };
  if (!std::getline(in, line)) fail("empty path file");
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) header.push_back(cell);
  }
  if (header.size() < 3 || header[0] != "path_id" || header[1] != "waypoint_index") {
    fail("expected header path_id,waypoint_index,q0,...");
  }
  const std::size_t dof = header.size() - 2;
  for (std::size_t k = 0; k < dof; ++k) {
    if (header[k + 2] != "q" + std::to_string(k)) fail("column " + header[k + 2] + ": expected q" + std::to_string(k));
  }
  std::map<int, Path> paths;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != dof + 2) fail("expected " + std::to_string(dof + 2) + " columns");
    try {
      std::size_t used = 0;
      const int id = std::stoi(cells[0], &used);
      if (used != cells[0].size()) throw std::invalid_argument(cells[0]);
      const int index = std::stoi(cells[1], &used);
      if (used != cells[1].size()) throw std::invalid_argument(cells[1]);
      Path& p = paths[id];
      if (index != static_cast<int>(p.waypoints.size())) {
        fail("waypoint_index " + std::to_string(index) + " out of sequence");
      }
      JointVector q(static_cast<Eigen::Index>(dof));
      for (std::size_t k = 0; k < dof; ++k) {
        q[static_cast<Eigen::Index>(k)] = std::stod(cells[k + 2], &used);
        if (used != cells[k + 2].size()) throw std::invalid_argument(cells[k + 2]);
      }
      p.waypoints.push_back(q);
    } catch (const std::logic_error&) {
      fail("malformed numeric cell");
    }
  }
  for (auto& [id, p] : paths) p.length = Path::Length(p.waypoints);
  return paths;
}

}  // namespace sqpcd
