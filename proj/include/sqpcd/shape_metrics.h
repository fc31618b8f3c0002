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

#ifndef SQPCD_SHAPE_METRICS_H_
#define SQPCD_SHAPE_METRICS_H_

#include <cstdint>
#include <string>
#include <variant>

#include "sqpcd/superquadric.h"

namespace sqpcd {

// Axis-aligned solid box with full side lengths l x w x h, centered at the
// origin.
struct Cuboid {
  double length = 1.0;
  double width = 1.0;
  double height = 1.0;
};

// Elliptic cylinder with radii rx, ry about the z axis and full height h,
// centered at the origin.
struct Cylinder {
  double radius_x = 1.0;
  double radius_y = 1.0;
  double height = 1.0;
};

// Closed convex primitive centered at the origin of its frame.
class PrimitiveShape {
 public:
  using Kind = std::variant<Cuboid, Cylinder, Superquadric>;

  // Throws std::invalid_argument if any dimension is not positive.
  explicit PrimitiveShape(Kind kind);

  const Kind& kind() const { return kind_; }
  bool Contains(const Vec3& x) const;
  // Half extents of the axis-aligned bounding box.
  Vec3 HalfExtents() const;
  PrimitiveShape Scaled(double s) const;
  std::string Describe() const;

 private:
  Kind kind_;
};

// Fixed superquadric parameters for the primitive: a cuboid maps to
// a = (l/2, w/2, h/2), eps = (0.2, 0.2); a cylinder to a = (rx, ry, h/2),
// eps = (0.1, 1.0); a superquadric is returned unchanged.
Superquadric SqApproximation(const PrimitiveShape& shape);

struct OverlapResult {
  double value = 0.0;      // V(A intersect B) / V(A union B)
  double std_error = 0.0;  // binomial standard error of the ratio
  long in_both = 0;
  long in_either = 0;
  int samples = 0;
};

// Monte-Carlo intersection-over-union from n >= 1000 points drawn uniformly in
// the joint axis-aligned bounding box. Throws std::invalid_argument for
// n < 1000 and NumericalError if no sample lands in either shape.
OverlapResult OverlapMetric(const PrimitiveShape& query,
                            const PrimitiveShape& truth, int n,
                            std::uint64_t seed);

inline constexpr int kDefaultOverlapSamples = 1000000;

}  // namespace sqpcd

#endif  // SQPCD_SHAPE_METRICS_H_
