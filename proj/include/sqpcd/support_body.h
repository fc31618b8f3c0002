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

#ifndef SQPCD_SUPPORT_BODY_H_
#define SQPCD_SUPPORT_BODY_H_

#include <memory>
#include <vector>

#include "sqpcd/rotation.h"
#include "sqpcd/superquadric.h"

namespace sqpcd {

// Convex body described by its support-point map: Support(n) is the boundary
// point whose outward normal is n (the maximizer of n . x over the body).
// Implementations accept any nonzero direction; the result depends only on
// its direction.
class SupportBody {
 public:
  virtual ~SupportBody() = default;

  virtual Vec3 Support(const Vec3& direction) const = 0;

  // A point guaranteed to lie inside the body.
  virtual Vec3 Center() const = 0;

  // Radius of a sphere about Center() that contains the body.
  virtual double BoundingRadius() const = 0;

  double SupportValue(const Vec3& direction) const {
    return direction.dot(Support(direction));
  }
};

using BodyPtr = std::shared_ptr<const SupportBody>;

// Superquadric placed by a rigid pose: support is R x(R^T n) + t.
class PosedSuperquadric final : public SupportBody {
 public:
  PosedSuperquadric(Superquadric shape, Pose pose);

  Vec3 Support(const Vec3& direction) const override;
  Vec3 Center() const override { return pose_.translation; }
  double BoundingRadius() const override { return shape_.BoundingRadius(); }

  const Superquadric& shape() const { return shape_; }
  const Pose& pose() const { return pose_; }

 private:
  Superquadric shape_;
  Pose pose_;
};

class PointBody final : public SupportBody {
 public:
  explicit PointBody(const Vec3& p) : p_(p) {}
  Vec3 Support(const Vec3&) const override { return p_; }
  Vec3 Center() const override { return p_; }
  double BoundingRadius() const override { return 0.0; }

 private:
  Vec3 p_;
};

// S1 (+) (-S2): support is x1(n) - x2(-n). The relative position t2 - t1 lies
// inside it iff the two bodies overlap.
class MinkowskiDifference final : public SupportBody {
 public:
  MinkowskiDifference(BodyPtr first, BodyPtr second);

  Vec3 Support(const Vec3& direction) const override;
  Vec3 Center() const override;
  double BoundingRadius() const override;

 private:
  BodyPtr first_;
  BodyPtr second_;
};

// Image of a body under an invertible linear map L. The support along n is
// L x(L^T n).
class LinearTransformedBody final : public SupportBody {
 public:
  LinearTransformedBody(BodyPtr body, const Mat3& map);

  Vec3 Support(const Vec3& direction) const override;
  Vec3 Center() const override { return map_ * body_->Center(); }
  double BoundingRadius() const override;

 private:
  BodyPtr body_;
  Mat3 map_;
};

// Boundary point of S1 (+) (-S2) with outward normal n.
Vec3 MinkowskiBoundaryPoint(const SupportBody& s1, const SupportBody& s2,
                            const Vec3& n);

}  // namespace sqpcd

#endif  // SQPCD_SUPPORT_BODY_H_
