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

#include "sqpcd/rotation.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sqpcd {

bool IsRotation(const Mat3& m, double tol) {
  if (!m.allFinite()) return false;
  if ((m.transpose() * m - Mat3::Identity()).cwiseAbs().maxCoeff() > tol) {
    return false;
  }
  return std::abs(m.determinant() - 1.0) <= tol;
}

void CheckRotation(const Mat3& m) {
  if (!IsRotation(m)) {
    throw std::invalid_argument("matrix is not a rotation (R^T R != I or det != 1)");
  }
}

Mat3 Hat(const Vec3& w) {
  Mat3 h;
  h << 0.0, -w.z(), w.y(),
       w.z(), 0.0, -w.x(),
       -w.y(), w.x(), 0.0;
  return h;
}

Mat3 ExpSO3(const Vec3& w) {
  const double theta = w.norm();
  const Mat3 k = Hat(w);
  if (theta < 1e-8) {
    return Mat3::Identity() + k + 0.5 * k * k;
  }
  const double a = std::sin(theta) / theta;
  const double b = (1.0 - std::cos(theta)) / (theta * theta);
  return Mat3::Identity() + a * k + b * k * k;
}

Vec3 LogSO3(const Mat3& r) {
  const double cos_theta = std::clamp((r.trace() - 1.0) * 0.5, -1.0, 1.0);
  const Vec3 vee(r(2, 1) - r(1, 2), r(0, 2) - r(2, 0), r(1, 0) - r(0, 1));
  const double theta = std::atan2(0.5 * vee.norm(), cos_theta);
  if (theta < 1e-6) {
    // First-order expansion; vee = 2 sin(theta) axis.
    return 0.5 * (1.0 + theta * theta / 6.0) * vee;
  }
  if (std::numbers::pi - theta > 1e-4) {
    return theta / (2.0 * std::sin(theta)) * vee;
  }
  // Near pi the antisymmetric part vanishes; the symmetric part gives
  // axis axis^T = (sym(R) - cos(theta) I) / (1 - cos(theta)).
  const Mat3 b = (0.5 * (r + r.transpose()) - cos_theta * Mat3::Identity()) /
                 (1.0 - cos_theta);
  int k = 0;
  b.diagonal().maxCoeff(&k);
  Vec3 axis = b.col(k) / std::sqrt(std::max(b(k, k), 1e-300));
  axis.normalize();
  // Sign from the (small) antisymmetric part.
  if (axis.dot(vee) < 0.0) axis = -axis;
  return theta * axis;
}

double GeodesicDistance(const Mat3& a, const Mat3& b) {
  return LogSO3(a.transpose() * b).norm();
}

Mat3 QuaternionToRotation(double w, double x, double y, double z) {
  Eigen::Quaterniond q(w, x, y, z);
  const double n = q.norm();
  if (!(n > 1e-12) || !std::isfinite(n)) {
    throw std::invalid_argument("quaternion has zero or non-finite norm");
  }
  q.normalize();
  return q.toRotationMatrix();
}

Mat3 AxisAngle(const Vec3& axis, double angle) {
  return Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix();
}

Mat3 ProjectToSO3(const Mat3& m) {
  Eigen::JacobiSVD<Mat3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 d = Mat3::Identity();
  d(2, 2) = (svd.matrixU() * svd.matrixV().transpose()).determinant() < 0.0
                ? -1.0
                : 1.0;
  return svd.matrixU() * d * svd.matrixV().transpose();
}

Vec3 SurfaceAngles::Normal() const {
  const double cl = std::cos(latitude);
  return Vec3(cl * std::cos(longitude), cl * std::sin(longitude),
              std::sin(latitude));
}

SurfaceAngles SurfaceAngles::FromDirection(const Vec3& v) {
  return SurfaceAngles{std::atan2(v.z(), std::hypot(v.x(), v.y())),
                       std::atan2(v.y(), v.x())};
}

}  // namespace sqpcd
