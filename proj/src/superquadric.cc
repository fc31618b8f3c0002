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

#include "sqpcd/superquadric.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace sqpcd {
namespace {

// Dual-norm pieces for a 2D superellipse |u|^p + |v|^p = 1 with
// p = 2 / eps. For a normal (m0, m1) (already scaled by the semi-axes) the
// support point is u_i = sign(m_i) (|m_i| / K)^(eps / (2 - eps)) where
// K = ||m||_q with q = 2 / (2 - eps) the dual exponent, and the support value
// equals K. Every exponent here is positive so zero components stay finite.
struct Superellipse2 {
  double dual_exponent;  // q
  double point_exponent;  // eps / (2 - eps)

  explicit Superellipse2(double eps)
      : dual_exponent(2.0 / (2.0 - eps)), point_exponent(eps / (2.0 - eps)) {}

  double DualNorm(double m0, double m1) const {
    const double a0 = std::abs(m0);
    const double a1 = std::abs(m1);
    const double mx = std::max(a0, a1);
    if (mx == 0.0) return 0.0;
    const double r0 = a0 / mx;
    const double r1 = a1 / mx;
    return mx * std::pow(std::pow(r0, dual_exponent) +
                             std::pow(r1, dual_exponent),
                         1.0 / dual_exponent);
  }

  double Coordinate(double m, double dual_norm) const {
    if (dual_norm == 0.0 || m == 0.0) return 0.0;
    const double v = std::pow(std::min(std::abs(m) / dual_norm, 1.0),
                              point_exponent);
    return m < 0.0 ? -v : v;
  }
};

}  // namespace

Superquadric::Superquadric(const Vec3& semi_axes, const Vec2& eps)
    : semi_axes_(semi_axes), eps_(eps) {
  for (int i = 0; i < 3; ++i) {
    if (!(semi_axes_[i] > 0.0) || !std::isfinite(semi_axes_[i])) {
      std::ostringstream os;
      os << "superquadric semi-axis a" << (i + 1) << " must be positive, got "
         << semi_axes_[i];
      throw std::invalid_argument(os.str());
    }
  }
  for (int k = 0; k < 2; ++k) {
    if (!(eps_[k] > 0.0 && eps_[k] < 2.0)) {
      std::ostringstream os;
      os << "superquadric exponent eps" << (k + 1)
         << " must lie in (0, 2) for convexity, got " << eps_[k];
      throw std::invalid_argument(os.str());
    }
  }
}

Superquadric Superquadric::Sphere(double radius) {
  return Superquadric(Vec3::Constant(radius), Vec2(1.0, 1.0));
}

Superquadric Superquadric::Ellipsoid(const Vec3& semi_axes) {
  return Superquadric(semi_axes, Vec2(1.0, 1.0));
}

double Superquadric::ImplicitValue(const Vec3& x) const {
  const double e1 = eps_[0];
  const double e2 = eps_[1];
  const double u0 = std::abs(x[0] / semi_axes_[0]);
  const double u1 = std::abs(x[1] / semi_axes_[1]);
  const double u2 = std::abs(x[2] / semi_axes_[2]);
  const double planar = std::pow(u0, 2.0 / e2) + std::pow(u1, 2.0 / e2);
  return std::pow(planar, e2 / e1) + std::pow(u2, 2.0 / e1);
}

Vec3 Superquadric::SurfacePointFromNormal(const Vec3& n) const {
  if (!n.allFinite() || std::abs(n.norm() - 1.0) > 1e-9) {
    throw std::invalid_argument("surface normal must be a unit vector");
  }
  return SupportPoint(n);
}

Vec3 Superquadric::SupportPoint(const Vec3& direction) const {
  const Vec3 m = semi_axes_.cwiseProduct(direction);
  const Superellipse2 planar(eps_[1]);
  const Superellipse2 meridian(eps_[0]);
  const double k_planar = planar.DualNorm(m[0], m[1]);
  const double k_total = meridian.DualNorm(k_planar, m[2]);
  if (k_total == 0.0) {
    throw std::invalid_argument("support direction must be nonzero");
  }
  const double w = meridian.Coordinate(k_planar, k_total);
  const Vec3 u(w * planar.Coordinate(m[0], k_planar),
               w * planar.Coordinate(m[1], k_planar),
               meridian.Coordinate(m[2], k_total));
  return semi_axes_.cwiseProduct(u);
}

double Superquadric::SupportValue(const Vec3& direction) const {
  const Vec3 m = semi_axes_.cwiseProduct(direction);
  const Superellipse2 planar(eps_[1]);
  const Superellipse2 meridian(eps_[0]);
  return meridian.DualNorm(planar.DualNorm(m[0], m[1]), m[2]);
}

double Superquadric::EnclosingEllipsoidScale() const {
  // |diag(1/a) x(n)| is symmetric under sign flips of n, so the first octant
  // of the angle grid covers the whole surface.
  constexpr int kSteps = 121;
  double best = 0.0;
  for (int i = 0; i < kSteps; ++i) {
    const double lat = 0.5 * std::numbers::pi * i / (kSteps - 1);
    for (int j = 0; j < kSteps; ++j) {
      const double lon = 0.5 * std::numbers::pi * j / (kSteps - 1);
      const Vec3 x = SupportPoint(SurfaceAngles{lat, lon}.Normal());
      best = std::max(best, x.cwiseQuotient(semi_axes_).norm());
    }
  }
  return best * (1.0 + 1e-3);
}

Superquadric Superquadric::EnclosingEllipsoid() const {
  return Superquadric::Ellipsoid(semi_axes_ * EnclosingEllipsoidScale());
}

}  // namespace sqpcd
