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

#include "sqpcd/support_body.h"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace sqpcd {

PosedSuperquadric::PosedSuperquadric(Superquadric shape, Pose pose)
    : shape_(std::move(shape)), pose_(std::move(pose)) {
  CheckRotation(pose_.rotation);
}

Vec3 PosedSuperquadric::Support(const Vec3& direction) const {
  return pose_.rotation *
             shape_.SupportPoint(pose_.rotation.transpose() * direction) +
         pose_.translation;
}

MinkowskiDifference::MinkowskiDifference(BodyPtr first, BodyPtr second)
    : first_(std::move(first)), second_(std::move(second)) {
  if (!first_ || !second_) {
    throw std::invalid_argument("MinkowskiDifference needs two bodies");
  }
}

Vec3 MinkowskiDifference::Support(const Vec3& direction) const {
  return first_->Support(direction) - second_->Support(-direction);
}

Vec3 MinkowskiDifference::Center() const {
  return first_->Center() - second_->Center();
}

double MinkowskiDifference::BoundingRadius() const {
  return first_->BoundingRadius() + second_->BoundingRadius();
}

LinearTransformedBody::LinearTransformedBody(BodyPtr body, const Mat3& map)
    : body_(std::move(body)), map_(map) {
  if (!body_) throw std::invalid_argument("LinearTransformedBody needs a body");
  if (!map_.allFinite() || std::abs(map_.determinant()) < 1e-300) {
    throw std::invalid_argument("linear map must be finite and invertible");
  }
}

Vec3 LinearTransformedBody::Support(const Vec3& direction) const {
  return map_ * body_->Support(map_.transpose() * direction);
}

double LinearTransformedBody::BoundingRadius() const {
  // Operator 2-norm bounds the stretch of any radius vector.
  Eigen::JacobiSVD<Mat3> svd(map_);
  return svd.singularValues()[0] * body_->BoundingRadius();
}

Vec3 MinkowskiBoundaryPoint(const SupportBody& s1, const SupportBody& s2,
                            const Vec3& n) {
  if (!n.allFinite() || std::abs(n.norm() - 1.0) > 1e-9) {
    throw std::invalid_argument("boundary normal must be a unit vector");
  }
  return s1.Support(n) - s2.Support(-n);
}

}  // namespace sqpcd
