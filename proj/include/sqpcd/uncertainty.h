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

#ifndef SQPCD_UNCERTAINTY_H_
#define SQPCD_UNCERTAINTY_H_

#include <stdexcept>
#include <vector>

#include "sqpcd/random.h"
#include "sqpcd/superquadric.h"
#include "sqpcd/support_body.h"

namespace sqpcd {

// Raised when an iterative numerical routine fails to converge.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Empirical scaling constant for the enlarged surface.
inline constexpr double kDefaultEnlargement = 1.2;

// Position estimate t ~ N(mean, cov).
struct GaussianPosition {
  Vec3 mean = Vec3::Zero();
  Mat3 cov = Mat3::Zero();

  // Throws std::invalid_argument if cov is not symmetric (1e-12) or has an
  // eigenvalue below -1e-12.
  void Validate() const;

  // Symmetric square root of cov with negative eigenvalues clipped to zero.
  Mat3 SqrtCov() const;

  static GaussianPosition Exact(const Vec3& mean) { return {mean, Mat3::Zero()}; }
};

// Distribution of t2 - t1 for independent estimates.
GaussianPosition RelativePositionError(const GaussianPosition& b1,
                                       const GaussianPosition& b2);

// Karcher mean: R with sum_j log(R^T R_j) = 0, by the fixed point
// R <- R exp(mean_j log(R^T R_j)) started at the first sample.
// Throws std::invalid_argument for an empty set, a non-rotation, or a sample
// farther than pi/2 from the first one; NumericalError after 100 iterations.
Mat3 MeanRotation(const std::vector<Mat3>& samples);

// |sum_j log(R^T R_j)|_F in so(3).
double KarcherResidual(const Mat3& mean, const std::vector<Mat3>& samples);

// Orientation estimates and their mean.
struct RotationBelief {
  std::vector<Mat3> samples;
  Mat3 mean = Mat3::Identity();

  static RotationBelief FromSamples(std::vector<Mat3> samples);
  static RotationBelief Exact(const Mat3& rotation);
  int size() const { return static_cast<int>(samples.size()); }
};

// Position and orientation beliefs, assumed independent.
struct PoseBelief {
  GaussianPosition position;
  RotationBelief rotation;

  Pose MeanPose() const { return Pose{rotation.mean, position.mean}; }
};

// Enlarged surface of a superquadric under orientation samples:
//   x_ub(n) = center + (c / m) sum_j R_j x(R_j^T n).
// It is the Minkowski average of the rotated copies scaled by c.
class EnlargedBody final : public SupportBody {
 public:
  EnlargedBody(Superquadric shape, std::vector<Mat3> rotations, double c,
               const Vec3& center = Vec3::Zero());

  Vec3 Support(const Vec3& direction) const override;
  Vec3 Center() const override { return center_; }
  double BoundingRadius() const override {
    return c_ * shape_.BoundingRadius();
  }

 private:
  Superquadric shape_;
  std::vector<Mat3> rotations_;
  double c_;
  Vec3 center_;
};

// x_ub(n) for a unit normal n; requires c > 0.
Vec3 EnlargedSupportPoint(const Superquadric& sq, const RotationBelief& rot,
                          double c, const Vec3& n);

// Fraction of boundary points of every rotated copy R_j S that lie inside the
// enlarged body. `n_samples` boundary points are drawn per copy.
double EncapsulationFraction(const Superquadric& sq, const RotationBelief& rot,
                             double c, int n_samples, Rng& rng);

}  // namespace sqpcd

#endif  // SQPCD_UNCERTAINTY_H_
