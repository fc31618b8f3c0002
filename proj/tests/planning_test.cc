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

#include <cmath>
#include <numbers>
#include <string>

#include <gtest/gtest.h>

#include "sqpcd/planning.h"
#include "sqpcd/random.h"
#include "sqpcd/scene_io.h"

namespace sqpcd {
namespace {

constexpr double kPi = std::numbers::pi;

JointVector Q(double a, double b, double c) { return JointVector{{a, b, c}}; }

Scene LoadCorpus(const std::string& name) {
  return LoadScene(std::string(SQPCD_SCENE_DIR) + "/" + name + ".yaml");
}

Scene EmptyScene() {
  Scene s;
  s.start = Q(-1.0, 0.2, 0.3);
  s.goal = Q(1.0, -0.2, 0.5);
  return s;
}

BodyBelief Exact(const Superquadric& shape, const Vec3& position) {
  return BodyBelief{shape,
                    PoseBelief{GaussianPosition::Exact(position),
                               RotationBelief::Exact(Mat3::Identity())},
                    1.0, std::nullopt};
}

TEST(ForwardKinematicsTest, ZeroConfigurationPlacesDeclaredOrigins) {
  const KinematicChain arm = KinematicChain::ThreeDofArm();
  const std::vector<Pose> frames = arm.ForwardKinematics(Q(0, 0, 0));
  ASSERT_EQ(frames.size(), 3u);
  EXPECT_TRUE(frames[0].translation.isApprox(Vec3::Zero()));
  EXPECT_NEAR((frames[1].translation - Vec3(0, 0, 0.3)).norm(), 0, 1e-15);
  EXPECT_NEAR((frames[2].translation - Vec3(0.4, 0, 0.3)).norm(), 0, 1e-15);
  for (const Pose& f : frames) EXPECT_TRUE(f.rotation.isIdentity(0));
}

TEST(ForwardKinematicsTest, QuarterTurnRotatesChildOrigin) {
  std::vector<ChainLink> links(2);
  links[0].bound = Superquadric::Sphere(0.05);
  links[0].joint_axis = Vec3::UnitZ();
  links[1].bound = Superquadric::Sphere(0.05);
  links[1].joint_origin = Vec3(0.5, 0, 0);
  links[1].parent = 0;
  const KinematicChain chain(links);
  const std::vector<Pose> frames = chain.ForwardKinematics(JointVector{{kPi / 2, 0.0}});
  EXPECT_NEAR((frames[1].translation - Vec3(0, 0.5, 0)).norm(), 0, 1e-15);
}

TEST(ForwardKinematicsTest, OppositeAnglesCancelOnOneLink) {
  std::vector<ChainLink> links(1);
  links[0].joint_axis = Vec3(1, 2, 3).normalized();
  const KinematicChain chain(links);
  Rng rng = MakeRng(1);
  for (int i = 0; i < 50; ++i) {
    const double q = Uniform(rng, -3, 3);
    const Pose a = chain.ForwardKinematics(JointVector{{q}})[0];
    const Pose b = chain.ForwardKinematics(JointVector{{-q}})[0];
    const Pose id = a.Compose(b);
    EXPECT_TRUE(id.rotation.isIdentity(1e-14));
    EXPECT_LT(id.translation.norm(), 1e-15);
  }
}

TEST(ForwardKinematicsTest, RejectsLimitViolationsAndBadChains) {
  const KinematicChain arm = KinematicChain::ThreeDofArm();
  EXPECT_THROW(arm.ForwardKinematics(Q(0, 2.0, 0)), std::invalid_argument);
  EXPECT_THROW(arm.ForwardKinematics(JointVector{{0.0, 0.0}}), std::invalid_argument);

  std::vector<ChainLink> links(1);
  links[0].joint_axis = Vec3(0, 0, 2);
  EXPECT_THROW(KinematicChain{links}, std::invalid_argument);
  links[0].joint_axis = Vec3::UnitZ();
  links[0].parent = 3;
  EXPECT_THROW(KinematicChain{links}, std::invalid_argument);

  // Three stacked links where the first and third overlap at rest.
  std::vector<ChainLink> folded(3);
  for (int i = 0; i < 3; ++i) {
    folded[i].bound = Superquadric::Sphere(0.3);
    folded[i].parent = i - 1;
    folded[i].joint_origin = Vec3(i == 0 ? 0.0 : 0.1, 0, 0);
  }
  EXPECT_THROW(KinematicChain{folded}, std::invalid_argument);
}

TEST(StateValidTest, EmptySceneIsValid) {
  const Scene s = EmptyScene();
  for (Checker c : kAllCheckers) {
    const StateValidity v = StateValid(s, Q(0.3, 0.1, -0.4), c);
    EXPECT_TRUE(v.valid);
    EXPECT_EQ(v.max_prob, 0.0);
  }
}

TEST(StateValidTest, OverlapAtMeanIsInvalidForEveryChecker) {
  Scene s = EmptyScene();
  Obstacle o{"ball", Exact(Superquadric::Sphere(0.1), Vec3(0.6, 0, 0.3))};
  o.body.belief.position.cov = 4e-4 * Mat3::Identity();
  s.obstacles.push_back(o);
  for (Checker c : kAllCheckers) {
    const StateValidity v = StateValid(s, Q(0, 0, 0), c);
    EXPECT_FALSE(v.valid) << CheckerName(c);
    EXPECT_GE(v.max_prob, 0.5) << CheckerName(c);
  }
}

// Property: invalid(deterministic) => invalid(position_lcc) => invalid(pose_lcc)
// on the rollout benchmark scene (c >= 1, modest orientation spread).
TEST(StateValidTest, CheckerNesting) {
  const Scene s = LoadCorpus("benchmark");
  const StateValidator det(s, Checker::kDeterministic);
  const StateValidator pos(s, Checker::kPositionLcc);
  const StateValidator pose(s, Checker::kPoseLcc);
  const StateValidator h(s, Checker::kHLcc);
  Rng rng = MakeRng(2);
  int invalid_det = 0, invalid_pose = 0;
  for (int i = 0; i < 400; ++i) {
    const JointVector q = Q(Uniform(rng, -1.2, 1.2), Uniform(rng, -0.6, 0.6),
                            Uniform(rng, -1.5, 1.5));
    const bool d = det.IsValid(q), p = pos.IsValid(q), r = pose.IsValid(q);
    if (!d) EXPECT_FALSE(p) << i;
    if (!p) EXPECT_FALSE(r) << i;
    // The ellipsoid screen only clears pairs the tangent bound also clears.
    EXPECT_EQ(h.IsValid(q), r) << i;
    invalid_det += !d;
    invalid_pose += !r;
  }
  EXPECT_GT(invalid_det, 10);
  EXPECT_GT(invalid_pose, invalid_det);
}

TEST(StateValidTest, EvaluateAgreesWithEarlyExit) {
  const Scene s = LoadCorpus("narrow");
  Rng rng = MakeRng(3);
  for (Checker c : kAllCheckers) {
    const StateValidator v(s, c);
    for (int i = 0; i < 50; ++i) {
      const JointVector q = Q(Uniform(rng, -1, 1), Uniform(rng, -0.5, 0.5),
                              Uniform(rng, -1, 1));
      const StateValidity full = v.Evaluate(q);
      EXPECT_EQ(full.valid, v.IsValid(q));
      EXPECT_EQ(full.valid, full.max_prob < s.delta);
    }
  }
}

TEST(InterpolateTest, StepBoundAndEndpoint) {
  const JointVector a = Q(0, 0, 0), b = Q(0.26, -0.1, 0.0);
  const std::vector<JointVector> states = InterpolateSegment(a, b);
  ASSERT_EQ(states.size(), 6u);
  EXPECT_EQ(states.back(), b);
  JointVector prev = a;
  for (const JointVector& q : states) {
    EXPECT_LE((q - prev).cwiseAbs().maxCoeff(), kInterpolationStep + 1e-12);
    prev = q;
  }
  EXPECT_TRUE(InterpolateSegment(a, a).empty());
}

void ExpectWellFormed(const Scene& s, Checker c, const Path& path) {
  ASSERT_FALSE(path.waypoints.empty());
  EXPECT_EQ(path.waypoints.front(), s.start);
  EXPECT_EQ(path.waypoints.back(), s.goal);
  EXPECT_NEAR(path.length, Path::Length(path.waypoints), 1e-9);
  const StateValidator v(s, c);
  for (std::size_t i = 0; i < path.waypoints.size(); ++i) {
    EXPECT_TRUE(v.IsValid(path.waypoints[i])) << i;
    if (i > 0) {
      EXPECT_LE((path.waypoints[i] - path.waypoints[i - 1]).cwiseAbs().maxCoeff(),
                kInterpolationStep + 1e-12);
    }
  }
}

TEST(RrtConnectTest, EmptySceneGivesStraightLine) {
  const Scene s = EmptyScene();
  const PlanResult r = PlanRrtConnect(s, Checker::kPoseLcc, 1);
  ASSERT_TRUE(r.path.has_value());
  EXPECT_EQ(r.iterations, 0);
  EXPECT_NEAR(r.path->length, (s.goal - s.start).norm(), 1e-12);
  ExpectWellFormed(s, Checker::kPoseLcc, *r.path);
}

TEST(RrtConnectTest, StartEqualsGoal) {
  Scene s = EmptyScene();
  s.goal = s.start;
  const PlanResult r = PlanRrtConnect(s, Checker::kDeterministic, 1);
  ASSERT_TRUE(r.path.has_value());
  EXPECT_EQ(r.path->length, 0.0);
  EXPECT_EQ(r.path->waypoints.size(), 1u);
}

TEST(RrtConnectTest, ValidDeterministicPathsOnCorpus) {
  for (const char* name : {"sparse", "benchmark", "clamp"}) {
    const Scene s = LoadCorpus(name);
    for (Checker c : {Checker::kDeterministic, Checker::kPositionLcc}) {
      const PlanResult a = PlanRrtConnect(s, c, 17);
      ASSERT_TRUE(a.path.has_value()) << name << " " << CheckerName(c);
      ExpectWellFormed(s, c, *a.path);
      const PlanResult b = PlanRrtConnect(s, c, 17);
      ASSERT_TRUE(b.path.has_value());
      EXPECT_EQ(a.path->waypoints, b.path->waypoints);
    }
  }
}

TEST(RrtConnectTest, RejectsInvalidEndpoints) {
  Scene s = EmptyScene();
  s.obstacles.push_back(
      Obstacle{"ball", Exact(Superquadric::Sphere(0.1),
                             s.chain.BoundPoses(s.start)[2].translation)});
  EXPECT_THROW(PlanRrtConnect(s, Checker::kDeterministic, 1), std::invalid_argument);
}

TEST(RrtConnectTest, TimeoutReturnsNoPath) {
  const Scene s = LoadCorpus("benchmark");
  PlannerOptions opts;
  opts.max_time_s = 0.0;
  const PlanResult r = PlanRrtConnect(s, Checker::kDeterministic, 1, opts);
  EXPECT_FALSE(r.path.has_value());
  EXPECT_TRUE(r.timed_out);
}

TEST(RolloutTest, DegenerateBeliefsNeverFail) {
  Scene s = LoadCorpus("benchmark");
  for (Obstacle& o : s.obstacles) {
    o.body = o.body.PositionOnly();
    o.body.belief.position.cov.setZero();
  }
  const PlanResult r = PlanRrtConnect(s, Checker::kDeterministic, 4);
  ASSERT_TRUE(r.path.has_value());
  EXPECT_EQ(Rollout(s, *r.path, 200, 5).risk, 0.0);
}

TEST(RolloutTest, PathThroughObstacleAlwaysFails) {
  Scene s = EmptyScene();
  const Path straight{{s.start, s.goal}, (s.goal - s.start).norm()};
  Obstacle o{"ball", Exact(Superquadric::Sphere(0.05),
                           s.chain.BoundPoses(s.goal)[2].translation)};
  o.body.belief.position.cov = 1e-5 * Mat3::Identity();
  s.obstacles.push_back(o);
  const RolloutResult r = Rollout(s, straight, 300, 6);
  EXPECT_EQ(r.risk, 1.0);
  ASSERT_EQ(r.failures.size(), 300u);
  EXPECT_EQ(r.failures.front().obstacle, "ball");
  EXPECT_EQ(r.failures.front().waypoint, 1);
}

TEST(RolloutTest, DeterministicPerSeed) {
  const Scene s = LoadCorpus("benchmark");
  const PlanResult r = PlanRrtConnect(s, Checker::kDeterministic, 8);
  ASSERT_TRUE(r.path.has_value());
  const RolloutResult a = Rollout(s, *r.path, 300, 9);
  const RolloutResult b = Rollout(s, *r.path, 300, 9);
  EXPECT_EQ(a.risk, b.risk);
  ASSERT_EQ(a.failures.size(), b.failures.size());
  for (std::size_t i = 0; i < a.failures.size(); ++i) {
    EXPECT_EQ(a.failures[i].rollout, b.failures[i].rollout);
    EXPECT_EQ(a.failures[i].waypoint, b.failures[i].waypoint);
  }
  EXPECT_THROW(Rollout(s, Path{}, 10, 1), std::invalid_argument);
  EXPECT_THROW(Rollout(s, *r.path, 0, 1), std::invalid_argument);
}

}  // namespace
}  // namespace sqpcd
