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
#include <memory>

#include <gtest/gtest.h>

#include "sqpcd/convex_query.h"
#include "sqpcd/rotation.h"
#include "sqpcd/superquadric.h"
#include "sqpcd/support_body.h"
#include "test_util.h"

namespace sqpcd {
namespace {

using testing::AngleBetween;
using testing::DenseSurface;
using testing::ImplicitGradient;
using testing::RandomSuperquadric;

TEST(SuperquadricTest, RejectsInvalidParameters) {
  EXPECT_THROW(Superquadric(Vec3(1, 0, 1), Vec2(1, 1)), std::invalid_argument);
  EXPECT_THROW(Superquadric(Vec3(1, 1, 1), Vec2(2.0, 1)), std::invalid_argument);
  EXPECT_THROW(Superquadric(Vec3(1, 1, 1), Vec2(1, 0.0)), std::invalid_argument);
  EXPECT_NO_THROW(Superquadric(Vec3(1, 1, 1), Vec2(1.99, 0.01)));
}

TEST(SuperquadricTest, ImplicitValueAnchors) {
  const Superquadric sphere = Superquadric::Sphere(1.0);
  EXPECT_DOUBLE_EQ(sphere.ImplicitValue(Vec3(0, 0, 1)), 1.0);
  EXPECT_DOUBLE_EQ(sphere.ImplicitValue(Vec3::Zero()), 0.0);

  const Superquadric boxy(Vec3(1, 1, 1), Vec2(0.2, 0.2));
  EXPECT_DOUBLE_EQ(boxy.ImplicitValue(Vec3::Zero()), 0.0);
  // Exponent 2/0.2 = 10 on every term: 3 * 0.9^10.
  const double psi = boxy.ImplicitValue(Vec3(0.9, 0.9, 0.9));
  EXPECT_NEAR(psi, 3.0 * std::pow(0.9, 10), 1e-12);
  EXPECT_GT(psi, 1.0);
  // Dense-surface cross-check: along the diagonal no surface point reaches
  // the query point, so it is outside.
  const Vec3 d = Vec3(1, 1, 1).normalized();
  double reach = 0.0;
  for (const Vec3& x : DenseSurface(boxy, 201, 400)) reach = std::max(reach, d.dot(x));
  EXPECT_LT(reach, d.dot(Vec3(0.9, 0.9, 0.9)));
}

TEST(SuperquadricTest, EllipsoidDegeneration) {
  const Vec3 a(2.0, 1.0, 0.5);
  const Superquadric e = Superquadric::Ellipsoid(a);
  Rng rng = MakeRng(3);
  for (int i = 0; i < 200; ++i) {
    const Vec3 x = 2.0 * StandardNormal3(rng);
    const Vec3 u = x.cwiseQuotient(a);
    EXPECT_NEAR(e.ImplicitValue(x), u.squaredNorm(), 1e-12 * (1 + u.squaredNorm()));
    const Vec3 n = UniformUnitVector(rng);
    const Vec3 expected = a.cwiseProduct(a).cwiseProduct(n) / a.cwiseProduct(n).norm();
    EXPECT_LT((e.SurfacePointFromNormal(n) - expected).norm(), 1e-9);
  }
}

TEST(SuperquadricTest, SurfacePointAnchors) {
  const Superquadric sphere = Superquadric::Sphere(1.0);
  EXPECT_LT((sphere.SurfacePointFromNormal(Vec3(0, 0, 1)) - Vec3(0, 0, 1)).norm(), 1e-15);

  const Superquadric e = Superquadric::Ellipsoid(Vec3(2, 1, 1));
  EXPECT_LT((e.SurfacePointFromNormal(Vec3(1, 0, 0)) - Vec3(2, 0, 0)).norm(), 1e-15);
  const Vec3 x = e.SurfacePointFromNormal(Vec3(1, 1, 0).normalized());
  EXPECT_LT((x - Vec3(4, 1, 0) / std::sqrt(5.0)).norm(), 1e-12);
  EXPECT_LT(AngleBetween(ImplicitGradient(e, x), Vec3(1, 1, 0)), 1e-7);

  const Superquadric boxy(Vec3(0.7, 1.1, 0.4), Vec2(0.2, 0.2));
  const Vec3 n = Vec3(0.3, -0.5, 0.81).normalized();
  const Vec3 xb = boxy.SurfacePointFromNormal(n);
  EXPECT_NEAR(boxy.ImplicitValue(xb), 1.0, 1e-10);
  EXPECT_LT(AngleBetween(ImplicitGradient(boxy, xb), n), 1e-6);
}

TEST(SuperquadricTest, RejectsNonUnitNormal) {
  const Superquadric s = Superquadric::Sphere(1.0);
  EXPECT_THROW(s.SurfacePointFromNormal(Vec3(0, 0, 2)), std::invalid_argument);
  EXPECT_THROW(s.SurfacePointFromNormal(Vec3(0, 0, 1 + 1e-6)), std::invalid_argument);
}

// Property: the finite-difference gradient of the implicit function at x(n)
// is parallel to n, and x(n) lies on the surface.
TEST(SuperquadricTest, GradientConsistencyProperty) {
  Rng rng = MakeRng(11);
  int checked = 0;
  for (int i = 0; i < 300; ++i) {
    const Superquadric sq = RandomSuperquadric(rng, 0.3, 1.7);
    const Vec3 n = UniformUnitVector(rng);
    const Vec3 x = sq.SurfacePointFromNormal(n);
    // Away from the axis planes the exponents are well conditioned; near them
    // a finite-difference oracle loses all its digits to cancellation.
    if (x.cwiseQuotient(sq.semi_axes()).cwiseAbs().minCoeff() < 1e-2) continue;
    EXPECT_NEAR(sq.ImplicitValue(x), 1.0, 1e-9);
    EXPECT_LT(AngleBetween(ImplicitGradient(sq, x), n), 1e-5)
        << "a=" << sq.semi_axes().transpose() << " eps=" << sq.eps().transpose();
    ++checked;
  }
  EXPECT_GT(checked, 150);
}

// Property: n . x(n) >= n . x(m) for all pairs, over the whole convex range
// including very box-like exponents.
TEST(SuperquadricTest, SupportMaximalityProperty) {
  Rng rng = MakeRng(12);
  for (int i = 0; i < 50; ++i) {
    const Superquadric sq = RandomSuperquadric(rng, 0.01, 1.99);
    std::vector<Vec3> normals, points;
    for (int k = 0; k < 60; ++k) {
      normals.push_back(UniformUnitVector(rng));
      points.push_back(sq.SupportPoint(normals.back()));
    }
    for (std::size_t a = 0; a < normals.size(); ++a) {
      EXPECT_NEAR(sq.SupportValue(normals[a]), normals[a].dot(points[a]), 1e-12);
      for (std::size_t b = 0; b < normals.size(); ++b) {
        EXPECT_GE(normals[a].dot(points[a]), normals[a].dot(points[b]) - 1e-9);
      }
    }
  }
}

TEST(SuperquadricTest, SupportMatchesDenseSurfaceMaximum) {
  Rng rng = MakeRng(13);
  for (int i = 0; i < 10; ++i) {
    const Superquadric sq = RandomSuperquadric(rng, 0.2, 1.8);
    const auto surface = DenseSurface(sq, 301, 600);
    for (int k = 0; k < 10; ++k) {
      const Vec3 n = UniformUnitVector(rng);
      double best = -1e9;
      for (const Vec3& x : surface) best = std::max(best, n.dot(x));
      // Dense samples never exceed the support value and come close to it.
      EXPECT_LE(best, sq.SupportValue(n) + 1e-12);
      EXPECT_GT(best, sq.SupportValue(n) - 2e-3);
    }
  }
}

TEST(SuperquadricTest, EnclosingEllipsoidContainsSurface) {
  Rng rng = MakeRng(14);
  for (int i = 0; i < 10; ++i) {
    const Superquadric sq = RandomSuperquadric(rng, 0.01, 1.9);
    const Superquadric e = sq.EnclosingEllipsoid();
    EXPECT_LE(sq.EnclosingEllipsoidScale(), std::sqrt(3.0) * 1.001 + 1e-12);
    for (const Vec3& x : DenseSurface(sq, 101, 200)) {
      EXPECT_LE(e.ImplicitValue(x), 1.0);
    }
  }
}

TEST(MinkowskiTest, SphereSum) {
  auto s1 = std::make_shared<PosedSuperquadric>(Superquadric::Sphere(1.0), Pose{});
  auto s2 = std::make_shared<PosedSuperquadric>(Superquadric::Sphere(0.5), Pose{});
  const Vec3 x = MinkowskiBoundaryPoint(*s1, *s2, Vec3(0, 0, 1));
  EXPECT_LT((x - Vec3(0, 0, 1.5)).norm(), 1e-15);
}

TEST(MinkowskiTest, PointIsIdentity) {
  Rng rng = MakeRng(21);
  const PosedSuperquadric s1(RandomSuperquadric(rng), Pose{UniformRotation(rng), Vec3::Zero()});
  const PointBody origin(Vec3::Zero());
  for (int i = 0; i < 20; ++i) {
    const Vec3 n = UniformUnitVector(rng);
    EXPECT_EQ(MinkowskiBoundaryPoint(s1, origin, n), s1.Support(n));
  }
}

TEST(MinkowskiTest, RotatedFormAndMaximality) {
  Rng rng = MakeRng(22);
  for (int trial = 0; trial < 5; ++trial) {
    const Superquadric q1 = RandomSuperquadric(rng, 0.05, 1.9);
    const Superquadric q2 = RandomSuperquadric(rng, 0.05, 1.9);
    const Mat3 r1 = UniformRotation(rng);
    const Mat3 r2 = UniformRotation(rng);
    const PosedSuperquadric s1(q1, Pose{r1, Vec3::Zero()});
    const PosedSuperquadric s2(q2, Pose{r2, Vec3::Zero()});
    std::vector<Vec3> normals, points;
    for (int i = 0; i < 40; ++i) {
      for (int j = 0; j < 20; ++j) {
        const Vec3 n = SurfaceAngles{-M_PI / 2 + M_PI * (i + 0.5) / 40,
                                     -M_PI + 2 * M_PI * j / 20}.Normal();
        const Vec3 x = MinkowskiBoundaryPoint(s1, s2, n);
        const Vec3 expected = r1 * q1.SupportPoint(r1.transpose() * n) -
                              r2 * q2.SupportPoint(-(r2.transpose() * n));
        EXPECT_LT((x - expected).norm(), 1e-12);
        normals.push_back(n);
        points.push_back(x);
      }
    }
    for (std::size_t a = 0; a < normals.size(); a += 7) {
      for (std::size_t b = 0; b < normals.size(); ++b) {
        EXPECT_GE(normals[a].dot(points[a]), normals[a].dot(points[b]) - 1e-9);
      }
    }
  }
}

TEST(MinkowskiTest, SwapSymmetry) {
  Rng rng = MakeRng(23);
  const PosedSuperquadric s1(RandomSuperquadric(rng), Pose{UniformRotation(rng), Vec3::Zero()});
  const PosedSuperquadric s2(RandomSuperquadric(rng), Pose{UniformRotation(rng), Vec3::Zero()});
  for (int i = 0; i < 50; ++i) {
    const Vec3 n = UniformUnitVector(rng);
    const Vec3 a = MinkowskiBoundaryPoint(s1, s2, n);
    const Vec3 b = MinkowskiBoundaryPoint(s2, s1, -n);
    EXPECT_LT((a + b).norm(), 1e-12);
  }
}

TEST(ContainsTest, SphereAnchors) {
  const PosedSuperquadric sphere(Superquadric::Sphere(1.0), Pose{});
  EXPECT_TRUE(Contains(sphere, Vec3::Zero()).inside);
  EXPECT_FALSE(Contains(sphere, Vec3(0, 0, 1.01)).inside);
  EXPECT_TRUE(Contains(sphere, Vec3(0, 0, 0.99)).inside);
}

// Property: GJK membership agrees with the implicit function on plain
// superquadrics.
TEST(ContainsTest, AgreesWithImplicitFunction) {
  Rng rng = MakeRng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const Superquadric sq = RandomSuperquadric(rng, 0.01, 1.99);
    const PosedSuperquadric body(sq, Pose{});
    int disagreements = 0;
    for (int i = 0; i < 1000; ++i) {
      const Vec3 p = sq.semi_axes().cwiseProduct(
          Vec3(Uniform(rng, -1.3, 1.3), Uniform(rng, -1.3, 1.3), Uniform(rng, -1.3, 1.3)));
      const double psi = sq.ImplicitValue(p);
      // Skip points within a hair of the boundary.
      if (std::abs(psi - 1.0) < 1e-6) continue;
      const ContainmentResult c = Contains(body, p);
      EXPECT_TRUE(c.converged);
      if (c.inside != (psi <= 1.0)) ++disagreements;
    }
    EXPECT_EQ(disagreements, 0) << "eps=" << sq.eps().transpose();
  }
}

TEST(SupportDistanceTest, Anchors) {
  const PosedSuperquadric sphere(Superquadric::Sphere(1.0), Pose{});
  const SupportDistanceResult r = SupportDistance(sphere, Vec3(0, 0, 3));
  EXPECT_NEAR(r.value, 2.0, 1e-9);
  EXPECT_LT((r.normal - Vec3(0, 0, 1)).norm(), 1e-6);

  const SupportDistanceResult in = SupportDistance(sphere, Vec3(0.2, 0, 0));
  EXPECT_LE(in.value, 0.0);
  EXPECT_NEAR(in.value, -0.8, 1e-6);

  const PosedSuperquadric e(Superquadric::Ellipsoid(Vec3(2, 1, 1)), Pose{});
  const SupportDistanceResult re = SupportDistance(e, Vec3(4, 0, 0));
  EXPECT_NEAR(re.value, 2.0, 1e-9);
  EXPECT_LT((re.normal - Vec3(1, 0, 0)).norm(), 1e-6);
}

// Property: outside distances match a brute-force minimum over a dense
// parametric surface sampling.
TEST(SupportDistanceTest, MatchesDenseSampling) {
  Rng rng = MakeRng(41);
  for (int trial = 0; trial < 8; ++trial) {
    const Superquadric sq = RandomSuperquadric(rng, 0.2, 1.8);
    const Mat3 r = UniformRotation(rng);
    const PosedSuperquadric body(sq, Pose{r, Vec3(0.1, -0.2, 0.3)});
    const auto surface = DenseSurface(sq, 301, 600);
    const Vec3 p = body.Center() + 2.5 * UniformUnitVector(rng);
    double best = 1e9;
    for (const Vec3& x : surface) best = std::min(best, (r * x + body.Center() - p).norm());
    const SupportDistanceResult d = SupportDistance(body, p);
    EXPECT_TRUE(d.converged);
    EXPECT_LE(d.value, best + 1e-9);
    EXPECT_GT(d.value, best - 5e-3);
    // The supporting plane separates: n . p - h(n) equals the distance.
    EXPECT_NEAR(d.normal.dot(p) - body.SupportValue(d.normal), d.value, 1e-7);
  }
}

TEST(RotationTest, LogExpRoundTripIncludingNearPi) {
  Rng rng = MakeRng(51);
  for (int i = 0; i < 200; ++i) {
    const Vec3 axis = UniformUnitVector(rng);
    const double angle = (i < 20) ? M_PI - 1e-3 * i : Uniform(rng, 0.0, M_PI);
    const Mat3 r = ExpSO3(angle * axis);
    EXPECT_TRUE(IsRotation(r));
    const Mat3 back = ExpSO3(LogSO3(r));
    EXPECT_LT((back - r).norm(), 1e-9) << angle;
  }
  EXPECT_LT(LogSO3(Mat3::Identity()).norm(), 1e-15);
}

TEST(RotationTest, QuaternionConversion) {
  const Mat3 r = QuaternionToRotation(std::cos(M_PI / 4), 0, 0, std::sin(M_PI / 4));
  EXPECT_LT((r * Vec3::UnitX() - Vec3::UnitY()).norm(), 1e-12);
  EXPECT_THROW(QuaternionToRotation(0, 0, 0, 0), std::invalid_argument);
}

}  // namespace
}  // namespace sqpcd
