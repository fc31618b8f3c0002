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

#include "sqpcd/planning.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

#include "sqpcd/random.h"
#include "sqpcd/support_body.h"

namespace sqpcd {
namespace {

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double StandardNormalCdf(double x) {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double MaxNorm(const JointVector& v) {
  return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}

BodyBelief LinkBelief(const Superquadric& bound, const Pose& pose,
                      const std::optional<Superquadric>& screen) {
  return BodyBelief{bound,
                    PoseBelief{GaussianPosition::Exact(pose.translation),
                               RotationBelief::Exact(pose.rotation)},
                    1.0, screen};
}

}  // namespace

KinematicChain::KinematicChain(std::vector<ChainLink> links, Pose base)
    : links_(std::move(links)), base_(std::move(base)) {
  if (links_.empty()) throw std::invalid_argument("chain needs at least one link");
  CheckRotation(base_.rotation);
  for (int i = 0; i < dof(); ++i) {
    const ChainLink& l = links_[i];
    if (l.parent != i - 1) {
      throw std::invalid_argument("link " + std::to_string(i) +
                                  ": chain must be serial (parent = index - 1)");
    }
    if (std::abs(l.joint_axis.norm() - 1.0) > 1e-9) {
      throw std::invalid_argument("link " + std::to_string(i) +
                                  ": joint axis must be a unit vector");
    }
    if (!(l.lower < l.upper)) {
      throw std::invalid_argument("link " + std::to_string(i) +
                                  ": joint limits must satisfy lower < upper");
    }
    CheckRotation(l.bound_offset.rotation);
  }
  const std::vector<Pose> frames = FramesUnchecked(JointVector::Zero(dof()));
  for (int i = 0; i < dof(); ++i) {
    for (int j = i + 2; j < dof(); ++j) {
      const PosedSuperquadric a(links_[i].bound,
                                frames[i].Compose(links_[i].bound_offset));
      const PosedSuperquadric b(links_[j].bound,
                                frames[j].Compose(links_[j].bound_offset));
      if (PosedOverlap(a, b)) {
        throw std::invalid_argument(
            "links " + std::to_string(i) + " and " + std::to_string(j) +
            " overlap at the zero configuration");
      }
    }
  }
}

KinematicChain KinematicChain::ThreeDofArm() {
  const Vec2 capsule(0.4, 1.0);
  // Capsule axes are the superquadric z axis; the arm links lie along x.
  const Mat3 along_x = AxisAngle(Vec3::UnitY(), std::numbers::pi / 2);
  std::vector<ChainLink> links(3);
  links[0] = ChainLink{Superquadric(Vec3(0.06, 0.06, 0.12), capsule),
                       Pose{Mat3::Identity(), Vec3(0, 0, 0.12)},
                       Vec3::UnitZ(), Vec3::Zero(), -1,
                       -std::numbers::pi, std::numbers::pi};
  links[1] = ChainLink{Superquadric(Vec3(0.05, 0.05, 0.2), capsule),
                       Pose{along_x, Vec3(0.2, 0, 0)},
                       Vec3::UnitY(), Vec3(0, 0, 0.3), 0, -1.5, 1.5};
  links[2] = ChainLink{Superquadric(Vec3(0.04, 0.04, 0.17), capsule),
                       Pose{along_x, Vec3(0.19, 0, 0)},
                       Vec3::UnitY(), Vec3(0.4, 0, 0), 1, -2.5, 2.5};
  return KinematicChain(std::move(links));
}

bool KinematicChain::WithinLimits(const JointVector& q) const {
  if (q.size() != dof()) return false;
  for (int i = 0; i < dof(); ++i) {
    if (!(q[i] >= links_[i].lower && q[i] <= links_[i].upper)) return false;
  }
  return true;
}

JointVector KinematicChain::LowerLimits() const {
  JointVector v(dof());
  for (int i = 0; i < dof(); ++i) v[i] = links_[i].lower;
  return v;
}

JointVector KinematicChain::UpperLimits() const {
  JointVector v(dof());
  for (int i = 0; i < dof(); ++i) v[i] = links_[i].upper;
  return v;
}

std::vector<Pose> KinematicChain::FramesUnchecked(const JointVector& q) const {
  std::vector<Pose> frames;
  frames.reserve(links_.size());
  for (int i = 0; i < dof(); ++i) {
    const Pose& parent = i == 0 ? base_ : frames[i - 1];
    frames.push_back(parent.Compose(Pose{Mat3::Identity(), links_[i].joint_origin})
                         .Compose(Pose{AxisAngle(links_[i].joint_axis, q[i]),
                                       Vec3::Zero()}));
  }
  return frames;
}

std::vector<Pose> KinematicChain::ForwardKinematics(const JointVector& q) const {
  if (q.size() != dof()) {
    throw std::invalid_argument("configuration has " + std::to_string(q.size()) +
                                " joints, chain has " + std::to_string(dof()));
  }
  if (!WithinLimits(q)) {
    throw std::invalid_argument("configuration violates a joint limit");
  }
  return FramesUnchecked(q);
}

std::vector<Pose> KinematicChain::BoundPoses(const JointVector& q) const {
  std::vector<Pose> poses = ForwardKinematics(q);
  for (int i = 0; i < dof(); ++i) poses[i] = poses[i].Compose(links_[i].bound_offset);
  return poses;
}

void Scene::Validate() const {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("delta must lie in (0, 1)");
  }
  if (!chain.WithinLimits(start)) {
    throw std::invalid_argument("start is outside the joint limits or has the wrong size");
  }
  if (!chain.WithinLimits(goal)) {
    throw std::invalid_argument("goal is outside the joint limits or has the wrong size");
  }
  for (const Obstacle& o : obstacles) o.body.Validate();
}

const Obstacle* Scene::FindObstacle(std::string_view name) const {
  for (const Obstacle& o : obstacles) {
    if (o.name == name) return &o;
  }
  return nullptr;
}

std::string_view CheckerName(Checker checker) {
  switch (checker) {
    case Checker::kDeterministic: return "deterministic";
    case Checker::kPositionLcc: return "position_lcc";
    case Checker::kPoseLcc: return "pose_lcc";
    case Checker::kHLcc: return "h_lcc";
  }
  return "unknown";
}

std::optional<Checker> ParseChecker(std::string_view name) {
  std::string snake(name);
  std::replace(snake.begin(), snake.end(), '-', '_');
  for (Checker c : kAllCheckers) {
    if (CheckerName(c) == snake) return c;
  }
  return std::nullopt;
}

StateValidator::StateValidator(const Scene& scene, Checker checker)
    : scene_(scene), checker_(checker) {
  for (const Obstacle& o : scene.obstacles) {
    switch (checker) {
      case Checker::kDeterministic:
      case Checker::kPositionLcc:
        obstacles_.push_back(o.body.PositionOnly());
        break;
      case Checker::kPoseLcc:
        obstacles_.push_back(o.body);
        break;
      case Checker::kHLcc:
        obstacles_.push_back(o.body.WithScreenEllipsoid());
        break;
    }
  }
  if (checker == Checker::kHLcc) {
    for (const ChainLink& l : scene.chain.links()) {
      link_screens_.push_back(l.bound.EnclosingEllipsoid());
    }
  }
}

double StateValidator::PairBound(const BodyBelief& link,
                                 std::size_t index) const {
  const BodyBelief& obstacle = obstacles_[index];
  const Vec3 d = obstacle.belief.position.mean - link.belief.position.mean;
  const double dist = d.norm();
  const double reach = link.shape.BoundingRadius() +
                       obstacle.enlargement_c * obstacle.shape.BoundingRadius();
  if (checker_ == Checker::kDeterministic) {
    if (dist > reach) return 0.0;
    return DeterministicCheck(link, obstacle).probability;
  }
  if (dist > reach) {
    // Bounding spheres give a supporting plane of a superset of the
    // Minkowski body, hence a valid (looser) bound.
    const Vec3 u = d / dist;
    const double var = u.dot(obstacle.belief.position.cov * u);
    const double screen =
        var > 1e-30 ? StandardNormalCdf((reach - dist) / std::sqrt(var)) : 0.0;
    if (screen < scene_.delta) return screen;
  }
  if (checker_ == Checker::kHLcc) return HLcc(link, obstacle, scene_.delta).probability;
  // lcc_tangent never exceeds lcc_center, so a center bound below delta
  // already settles the verdict.
  const double center = LccCenter(link, obstacle).probability;
  if (center < scene_.delta) return center;
  return LccTangent(link, obstacle).probability;
}

StateValidity StateValidator::Run(const JointVector& q, bool stop_early) const {
  StateValidity v;
  const std::vector<Pose> poses = scene_.chain.BoundPoses(q);
  const auto& links = scene_.chain.links();
  for (std::size_t i = 0; i < links.size(); ++i) {
    const BodyBelief link = LinkBelief(
        links[i].bound, poses[i],
        link_screens_.empty() ? std::nullopt
                              : std::optional<Superquadric>(link_screens_[i]));
    for (std::size_t k = 0; k < obstacles_.size(); ++k) {
      const double p = PairBound(link, k);
      v.max_prob = std::max(v.max_prob, p);
      if (p >= scene_.delta) {
        v.valid = false;
        if (stop_early) return v;
      }
    }
  }
  return v;
}

StateValidity StateValidator::Evaluate(const JointVector& q) const {
  return Run(q, false);
}

bool StateValidator::IsValid(const JointVector& q) const {
  return Run(q, true).valid;
}

bool StateValidator::EdgeValid(const JointVector& from,
                               const JointVector& to) const {
  for (const JointVector& q : InterpolateSegment(from, to)) {
    if (!IsValid(q)) return false;
  }
  return true;
}

StateValidity StateValid(const Scene& scene, const JointVector& q,
                         Checker checker) {
  return StateValidator(scene, checker).Evaluate(q);
}

std::vector<JointVector> InterpolateSegment(const JointVector& from,
                                            const JointVector& to,
                                            double step) {
  const JointVector diff = to - from;
  const double span = MaxNorm(diff);
  std::vector<JointVector> states;
  if (span == 0.0) return states;
  const int n = std::max(1, static_cast<int>(std::ceil(span / step - 1e-9)));
  states.reserve(n);
  for (int i = 1; i < n; ++i) {
    states.push_back(from + (static_cast<double>(i) / n) * diff);
  }
  states.push_back(to);
  return states;
}

double Path::Length(const std::vector<JointVector>& waypoints) {
  double length = 0.0;
  for (std::size_t i = 1; i < waypoints.size(); ++i) {
    length += (waypoints[i] - waypoints[i - 1]).norm();
  }
  return length;
}

namespace {

struct Tree {
  std::vector<JointVector> nodes;
  std::vector<int> parents;

  int Nearest(const JointVector& q) const {
    int best = 0;
    double best_d = (nodes[0] - q).squaredNorm();
    for (int i = 1; i < static_cast<int>(nodes.size()); ++i) {
      const double d = (nodes[i] - q).squaredNorm();
      if (d < best_d) {
        best_d = d;
        best = i;
      }
    }
    return best;
  }

  std::vector<JointVector> Branch(int index) const {
    std::vector<JointVector> out;
    for (int i = index; i >= 0; i = parents[i]) out.push_back(nodes[i]);
    return out;  // leaf to root
  }
};

enum class Growth { kTrapped, kAdvanced, kReached };

Path Densify(const std::vector<JointVector>& corners) {
  Path path;
  path.waypoints.push_back(corners.front());
  for (std::size_t i = 1; i < corners.size(); ++i) {
    for (JointVector& q : InterpolateSegment(corners[i - 1], corners[i])) {
      path.waypoints.push_back(std::move(q));
    }
  }
  path.length = Path::Length(path.waypoints);
  return path;
}

}  // namespace

PlanResult PlanRrtConnect(const Scene& scene, Checker checker,
                          std::uint64_t seed, const PlannerOptions& options) {
  const auto start_time = Clock::now();
  scene.Validate();
  const StateValidator validator(scene, checker);
  PlanResult result;
  auto valid = [&](const JointVector& q) {
    ++result.validity_checks;
    return validator.IsValid(q);
  };
  auto edge_valid = [&](const JointVector& a, const JointVector& b) {
    for (const JointVector& q : InterpolateSegment(a, b)) {
      if (!valid(q)) return false;
    }
    return true;
  };
  if (!valid(scene.start)) throw std::invalid_argument("start state is invalid");
  if (!valid(scene.goal)) throw std::invalid_argument("goal state is invalid");

  auto finish = [&](std::vector<JointVector> corners) {
    result.path = Densify(corners);
    result.plan_time_s = Seconds(start_time);
    return result;
  };
  if (scene.start == scene.goal) return finish({scene.start});
  if (edge_valid(scene.start, scene.goal)) return finish({scene.start, scene.goal});

  Rng rng = MakeRng(seed);
  const JointVector lo = scene.chain.LowerLimits();
  const JointVector hi = scene.chain.UpperLimits();
  Tree from_start{{scene.start}, {-1}};
  Tree from_goal{{scene.goal}, {-1}};
  Tree* a = &from_start;
  Tree* b = &from_goal;

  auto extend = [&](Tree& tree, const JointVector& target) {
    const int near = tree.Nearest(target);
    JointVector step = target - tree.nodes[near];
    const double span = MaxNorm(step);
    const bool reaches = span <= options.range;
    if (!reaches) step *= options.range / span;
    const JointVector q_new = reaches ? target : JointVector(tree.nodes[near] + step);
    if (!edge_valid(tree.nodes[near], q_new)) return Growth::kTrapped;
    tree.nodes.push_back(q_new);
    tree.parents.push_back(near);
    return reaches ? Growth::kReached : Growth::kAdvanced;
  };

  for (; result.iterations < options.max_iterations; ++result.iterations) {
    if (Seconds(start_time) > options.max_time_s) {
      result.timed_out = true;
      break;
    }
    JointVector sample(lo.size());
    for (int k = 0; k < sample.size(); ++k) sample[k] = Uniform(rng, lo[k], hi[k]);
    if (extend(*a, sample) != Growth::kTrapped) {
      const JointVector target = a->nodes.back();
      Growth g;
      do {
        g = extend(*b, target);
      } while (g == Growth::kAdvanced);
      if (g == Growth::kReached) {
        // The newest node of each tree is the shared connection state.
        std::vector<JointVector> start_side =
            from_start.Branch(static_cast<int>(from_start.nodes.size()) - 1);
        const std::vector<JointVector> goal_side =
            from_goal.Branch(static_cast<int>(from_goal.nodes.size()) - 1);
        std::reverse(start_side.begin(), start_side.end());
        start_side.insert(start_side.end(), goal_side.begin() + 1, goal_side.end());
        return finish(std::move(start_side));
      }
    }
    std::swap(a, b);
  }
  result.plan_time_s = Seconds(start_time);
  return result;
}

RolloutResult Rollout(const Scene& scene, const Path& path, int n_rollouts,
                      std::uint64_t seed) {
  if (path.waypoints.empty()) throw std::invalid_argument("rollout needs a non-empty path");
  if (n_rollouts < 1) throw std::invalid_argument("rollout count must be >= 1");
  const auto& links = scene.chain.links();
  std::vector<std::vector<PosedSuperquadric>> link_bodies;
  link_bodies.reserve(path.waypoints.size());
  for (const JointVector& q : path.waypoints) {
    const std::vector<Pose> poses = scene.chain.BoundPoses(q);
    std::vector<PosedSuperquadric> bodies;
    for (std::size_t i = 0; i < links.size(); ++i) {
      bodies.emplace_back(links[i].bound, poses[i]);
    }
    link_bodies.push_back(std::move(bodies));
  }
  std::vector<Mat3> roots;
  for (const Obstacle& o : scene.obstacles) {
    roots.push_back(o.body.belief.position.SqrtCov());
  }

  RolloutResult result;
  result.rollouts = n_rollouts;
  for (int r = 0; r < n_rollouts; ++r) {
    Rng rng = MakeRng(seed, static_cast<std::uint64_t>(r));
    std::vector<PosedSuperquadric> sampled;
    for (std::size_t k = 0; k < scene.obstacles.size(); ++k) {
      const BodyBelief& b = scene.obstacles[k].body;
      std::uniform_int_distribution<int> pick(0, b.belief.rotation.size() - 1);
      const Mat3& rot = b.belief.rotation.samples[pick(rng)];
      const Vec3 t = b.belief.position.mean + roots[k] * StandardNormal3(rng);
      sampled.emplace_back(b.shape, Pose{rot, t});
    }
    bool failed = false;
    for (std::size_t w = 0; w < link_bodies.size() && !failed; ++w) {
      for (std::size_t i = 0; i < links.size() && !failed; ++i) {
        const PosedSuperquadric& link = link_bodies[w][i];
        for (std::size_t k = 0; k < sampled.size(); ++k) {
          const double reach = link.BoundingRadius() + sampled[k].BoundingRadius();
          if ((link.Center() - sampled[k].Center()).squaredNorm() > reach * reach) {
            continue;
          }
          if (PosedOverlap(link, sampled[k])) {
            result.failures.push_back(RolloutFailure{
                r, static_cast<int>(w), static_cast<int>(i), scene.obstacles[k].name});
            failed = true;
            break;
          }
        }
      }
    }
  }
  result.risk = static_cast<double>(result.failures.size()) / n_rollouts;
  return result;
}

}  // namespace sqpcd
