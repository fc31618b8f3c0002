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

#include "sqpcd/shape_metrics.h"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "sqpcd/random.h"
#include "sqpcd/uncertainty.h"

namespace sqpcd {
namespace {

template <class... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};

void RequirePositive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw std::invalid_argument(std::string(what) + " must be positive");
  }
}

}  // namespace

PrimitiveShape::PrimitiveShape(Kind kind) : kind_(std::move(kind)) {
  std::visit(Overloaded{
                 [](const Cuboid& c) {
                   RequirePositive(c.length, "cuboid length");
                   RequirePositive(c.width, "cuboid width");
                   RequirePositive(c.height, "cuboid height");
                 },
                 [](const Cylinder& c) {
                   RequirePositive(c.radius_x, "cylinder rx");
                   RequirePositive(c.radius_y, "cylinder ry");
                   RequirePositive(c.height, "cylinder height");
                 },
                 [](const Superquadric&) {},
             },
             kind_);
}

bool PrimitiveShape::Contains(const Vec3& x) const {
  return std::visit(
      Overloaded{
          [&](const Cuboid& c) {
            return std::abs(x.x()) <= c.length / 2 &&
                   std::abs(x.y()) <= c.width / 2 &&
                   std::abs(x.z()) <= c.height / 2;
          },
          [&](const Cylinder& c) {
            const double u = x.x() / c.radius_x;
            const double v = x.y() / c.radius_y;
            return u * u + v * v <= 1.0 && std::abs(x.z()) <= c.height / 2;
          },
          [&](const Superquadric& sq) { return sq.ImplicitContains(x); },
      },
      kind_);
}

Vec3 PrimitiveShape::HalfExtents() const {
  return std::visit(
      Overloaded{
          [](const Cuboid& c) {
            return Vec3(c.length / 2, c.width / 2, c.height / 2);
          },
          [](const Cylinder& c) {
            return Vec3(c.radius_x, c.radius_y, c.height / 2);
          },
          // A convex superquadric lies inside its semi-axis box.
          [](const Superquadric& sq) { return Vec3(sq.semi_axes()); },
      },
      kind_);
}

PrimitiveShape PrimitiveShape::Scaled(double s) const {
  RequirePositive(s, "scale");
  return std::visit(
      Overloaded{
          [s](const Cuboid& c) {
            return PrimitiveShape(Cuboid{c.length * s, c.width * s, c.height * s});
          },
          [s](const Cylinder& c) {
            return PrimitiveShape(
                Cylinder{c.radius_x * s, c.radius_y * s, c.height * s});
          },
          [s](const Superquadric& sq) { return PrimitiveShape(sq.Scaled(s)); },
      },
      kind_);
}

std::string PrimitiveShape::Describe() const {
  std::ostringstream out;
  std::visit(Overloaded{
                 [&](const Cuboid& c) {
                   out << "cuboid(" << c.length << " " << c.width << " "
                       << c.height << ")";
                 },
                 [&](const Cylinder& c) {
                   out << "cylinder(" << c.radius_x << " " << c.radius_y
                       << " " << c.height << ")";
                 },
                 [&](const Superquadric& sq) {
                   const Vec3& a = sq.semi_axes();
                   out << "superquadric(" << a.x() << " " << a.y() << " "
                       << a.z() << "; " << sq.eps().x() << " " << sq.eps().y()
                       << ")";
                 },
             },
             kind_);
  return out.str();
}

Superquadric SqApproximation(const PrimitiveShape& shape) {
  return std::visit(
      Overloaded{
          [](const Cuboid& c) {
            return Superquadric(Vec3(c.length / 2, c.width / 2, c.height / 2),
                                Vec2(0.2, 0.2));
          },
          [](const Cylinder& c) {
            return Superquadric(Vec3(c.radius_x, c.radius_y, c.height / 2),
                                Vec2(0.1, 1.0));
          },
          [](const Superquadric& sq) { return sq; },
      },
      shape.kind());
}

OverlapResult OverlapMetric(const PrimitiveShape& query,
                            const PrimitiveShape& truth, int n,
                            std::uint64_t seed) {
  if (n < 1000) throw std::invalid_argument("overlap needs at least 1000 samples");
  const Vec3 half = query.HalfExtents().cwiseMax(truth.HalfExtents());
  Rng rng = MakeRng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  OverlapResult r;
  r.samples = n;
  for (int i = 0; i < n; ++i) {
    const Vec3 x(half.x() * unit(rng), half.y() * unit(rng), half.z() * unit(rng));
    const bool a = query.Contains(x);
    const bool b = truth.Contains(x);
    r.in_both += a && b;
    r.in_either += a || b;
  }
  if (r.in_either == 0) {
    throw NumericalError("overlap metric: no sample fell inside either shape");
  }
  r.value = static_cast<double>(r.in_both) / static_cast<double>(r.in_either);
  r.std_error = std::sqrt(r.value * (1.0 - r.value) / static_cast<double>(r.in_either));
  return r;
}

}  // namespace sqpcd
