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

#ifndef SQPCD_SUPERQUADRIC_H_
#define SQPCD_SUPERQUADRIC_H_

#include <Eigen/Dense>

#include "sqpcd/rotation.h"

namespace sqpcd {

using Vec2 = Eigen::Vector2d;

// Convex superquadric centered at the origin of its own frame.
//
// Implicit function:
//   Psi(x) = (|x1/a1|^(2/e2) + |x2/a2|^(2/e2))^(e2/e1) + |x3/a3|^(2/e1)
// with Psi < 1 inside, Psi = 1 on the boundary and Psi > 1 outside.
// Convexity requires 0 < e1, e2 < 2; e1 = e2 = 1 is an ellipsoid.
class Superquadric {
 public:
  // Unit sphere.
  Superquadric() : semi_axes_(Vec3::Ones()), eps_(Vec2::Ones()) {}

  // Throws std::invalid_argument unless all semi-axes are positive and both
  // exponents lie in (0, 2).
  Superquadric(const Vec3& semi_axes, const Vec2& eps);

  static Superquadric Sphere(double radius);
  static Superquadric Ellipsoid(const Vec3& semi_axes);

  const Vec3& semi_axes() const { return semi_axes_; }
  const Vec2& eps() const { return eps_; }

  double ImplicitValue(const Vec3& x) const;
  bool ImplicitContains(const Vec3& x) const { return ImplicitValue(x) <= 1.0; }

  // Boundary point whose outward normal is parallel to the unit vector n.
  // Throws std::invalid_argument if |n| deviates from 1 by more than 1e-9.
  Vec3 SurfacePointFromNormal(const Vec3& n) const;

  // Same as SurfacePointFromNormal without the unit-norm check. Any nonzero
  // direction is accepted; the result depends only on the direction.
  Vec3 SupportPoint(const Vec3& direction) const;

  // h(n) = n . x(n). Positively homogeneous of degree 1 in n.
  double SupportValue(const Vec3& direction) const;

  // Radius of a sphere about the center containing the body.
  double BoundingRadius() const { return semi_axes_.norm(); }

  // Largest |diag(1/a) x| over the boundary, estimated on a dense angle grid
  // and inflated by (1 + 1e-3). Scaling the semi-axes by this factor gives an
  // ellipsoid that contains the superquadric.
  double EnclosingEllipsoidScale() const;
  Superquadric EnclosingEllipsoid() const;

  Superquadric Scaled(double s) const {
    return Superquadric(semi_axes_ * s, eps_);
  }

 private:
  Vec3 semi_axes_;
  Vec2 eps_;
};

}  // namespace sqpcd

#endif  // SQPCD_SUPERQUADRIC_H_
