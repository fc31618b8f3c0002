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

#ifndef SQPCD_ROTATION_H_
#define SQPCD_ROTATION_H_

#include <Eigen/Dense>

namespace sqpcd {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

// Tolerance used to validate orthonormality and unit determinant.
inline constexpr double kRotationTolerance = 1e-9;

// True iff m is in SO(3) within kRotationTolerance.
bool IsRotation(const Mat3& m, double tol = kRotationTolerance);

// Throws std::invalid_argument if m is not a rotation.
void CheckRotation(const Mat3& m);

// Skew-symmetric matrix [w]_x.
Mat3 Hat(const Vec3& w);

// Exponential map so(3) -> SO(3) (Rodrigues).
Mat3 ExpSO3(const Vec3& w);

// Logarithm SO(3) -> so(3) as a rotation vector with norm in [0, pi].
Vec3 LogSO3(const Mat3& r);

// Geodesic angle between two rotations.
double GeodesicDistance(const Mat3& a, const Mat3& b);

// Unit quaternion (w, x, y, z) to rotation matrix. The quaternion is
// normalized; a zero quaternion throws std::invalid_argument.
Mat3 QuaternionToRotation(double w, double x, double y, double z);

// Rotation about a unit axis.
Mat3 AxisAngle(const Vec3& axis, double angle);

// Re-orthonormalizes a nearly orthogonal matrix (polar projection).
Mat3 ProjectToSO3(const Mat3& m);

// Rigid transform: x -> rotation * x + translation.
struct Pose {
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();

  Vec3 Apply(const Vec3& x) const { return rotation * x + translation; }
  Pose Compose(const Pose& other) const {
    return Pose{rotation * other.rotation,
                rotation * other.translation + translation};
  }
  Pose Inverse() const {
    return Pose{rotation.transpose(), -(rotation.transpose() * translation)};
  }
};

// Spherical angle convention shared by every module: psi[0] is latitude in
// [-pi/2, pi/2], psi[1] is longitude in (-pi, pi].
struct SurfaceAngles {
  double latitude = 0.0;
  double longitude = 0.0;

  Vec3 Normal() const;
  static SurfaceAngles FromDirection(const Vec3& v);
};

}  // namespace sqpcd

#endif  // SQPCD_ROTATION_H_
