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

#ifndef SQPCD_PLANNING_H_
#define SQPCD_PLANNING_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "sqpcd/pcd.h"
#include "sqpcd/rotation.h"
#include "sqpcd/superquadric.h"

namespace sqpcd {

using JointVector = Eigen::VectorXd;

// One revolute joint and the rigid link it drives. The joint frame sits at
// `joint_origin` in the parent link frame (the chain base for link 0) and
// rotates about `joint_axis`; the link's bounding superquadric is placed at
// `bound_offset` in the joint frame.
struct ChainLink {
  Superquadric bound;
  Pose bound_offset;
  Vec3 joint_axis = Vec3::UnitZ();
  Vec3 joint_origin = Vec3::Zero();
  int parent = -1;
  double lower = -3.14159;
  double upper = 3.14159;
};

// Serial chain of revolute joints with superquadric-bounded links.
class KinematicChain {
 public:
  // Validates the chain: link i must have parent i - 1, unit joint axes,
  // lower < upper, and non-adjacent link bounds must not overlap at the zero
  // configuration. Throws std::invalid_argument otherwise.
  explicit KinematicChain(std::vector<ChainLink> links, Pose base = {});

  // Yaw-pitch-elbow arm with capsule-like links, eps = (0.4, 1.0).
  static KinematicChain ThreeDofArm();

  int dof() const { return static_cast<int>(links_.size()); }
  const std::vector<ChainLink>& links() const { return links_; }
  const Pose& base() const { return base_; }

  bool WithinLimits(const JointVector& q) const;
  JointVector LowerLimits() const;
  JointVector UpperLimits() const;

  // Joint frame of every link. Throws std::invalid_argument if q has the
  // wrong size or violates a joint limit.
  std::vector<Pose> ForwardKinematics(const JointVector& q) const;
  // Pose of every link's bounding superquadric.
  std::vector<Pose> BoundPoses(const JointVector& q) const;

 private:
  std::vector<Pose> FramesUnchecked(const JointVector& q) const;

  std::vector<ChainLink> links_;
  Pose base_;
};

struct Obstacle {
  std::string name;
  BodyBelief body;
};

struct Scene {
  std::vector<Obstacle> obstacles;
  KinematicChain chain = KinematicChain::ThreeDofArm();
  JointVector start;
  JointVector goal;
  double delta = 0.05;
  std::uint64_t seed = 0;

  // Throws std::invalid_argument on bad endpoints, delta or beliefs.
  void Validate() const;
  const Obstacle* FindObstacle(std::string_view name) const;
};

enum class Checker { kDeterministic, kPositionLcc, kPoseLcc, kHLcc };

std::string_view CheckerName(Checker checker);
// Accepts snake_case or kebab-case names.
std::optional<Checker> ParseChecker(std::string_view name);
inline constexpr Checker kAllCheckers[] = {
    Checker::kDeterministic, Checker::kPositionLcc, Checker::kPoseLcc,
    Checker::kHLcc};

struct StateValidity {
  bool valid = true;
  // Largest per-pair collision-probability bound evaluated (0/1 for the
  // deterministic checker). Pairs cleared by a cheaper screen (bounding
  // spheres, then lcc_center) contribute that screen's bound, which is never
  // below the lcc_tangent value.
  double max_prob = 0.0;
};

// Link-obstacle validity under one checker. Obstacle beliefs are prepared
// once; links are treated as exactly known (identity orientation spread,
// zero position covariance, c = 1).
class StateValidator {
 public:
  StateValidator(const Scene& scene, Checker checker);

  // Evaluates every pair. valid <=> max_prob < delta.
  StateValidity Evaluate(const JointVector& q) const;
  // Stops at the first invalid pair.
  bool IsValid(const JointVector& q) const;
  // All states strictly after `from` up to and including `to` at the
  // interpolation step.
  bool EdgeValid(const JointVector& from, const JointVector& to) const;

  Checker checker() const { return checker_; }
  const Scene& scene() const { return scene_; }

 private:
  double PairBound(const BodyBelief& link, std::size_t obstacle) const;
  StateValidity Run(const JointVector& q, bool stop_early) const;

  const Scene& scene_;
  Checker checker_;
  std::vector<BodyBelief> obstacles_;
  std::vector<Superquadric> link_screens_;
};

StateValidity StateValid(const Scene& scene, const JointVector& q,
                         Checker checker);

// Max-norm joint step used to validate and densify edges (radians).
inline constexpr double kInterpolationStep = 0.05;

// Intermediate states of the segment (from, to], spaced at most `step` apart
// in max-norm.
std::vector<JointVector> InterpolateSegment(const JointVector& from,
                                            const JointVector& to,
                                            double step = kInterpolationStep);

struct Path {
  // Densified so consecutive waypoints are within kInterpolationStep.
  std::vector<JointVector> waypoints;
  // Sum of Euclidean joint-space segment norms (radians).
  double length = 0.0;

  static double Length(const std::vector<JointVector>& waypoints);
};

struct PlannerOptions {
  double max_time_s = 10.0;
  // Max-norm length of one tree extension (radians).
  double range = 0.3;
  // Hard cap on tree-growth iterations; keeps results seed-deterministic on
  // hosts of any speed as long as the time budget is not hit first.
  int max_iterations = 20000;
};

struct PlanResult {
  std::optional<Path> path;
  bool timed_out = false;
  int iterations = 0;
  int validity_checks = 0;
  double plan_time_s = 0.0;
};

// Bidirectional RRT-connect in joint space. Throws std::invalid_argument if
// start or goal is invalid under the checker.
PlanResult PlanRrtConnect(const Scene& scene, Checker checker,
                          std::uint64_t seed,
                          const PlannerOptions& options = {});

struct RolloutFailure {
  int rollout = 0;
  int waypoint = 0;
  int link = 0;
  std::string obstacle;
};

struct RolloutResult {
  double risk = 0.0;
  int rollouts = 0;
  std::vector<RolloutFailure> failures;
};

// Replays the path against obstacle poses drawn from their beliefs (rotation
// uniformly from the samples, translation from the Gaussian); a rollout fails
// when any waypoint collides at the sampled poses. Throws
// std::invalid_argument for an empty path or n_rollouts < 1.
RolloutResult Rollout(const Scene& scene, const Path& path, int n_rollouts,
                      std::uint64_t seed);

}  // namespace sqpcd

#endif  // SQPCD_PLANNING_H_
