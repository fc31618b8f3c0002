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

#include "sqpcd/uncertainty.h"

#include <cmath>
#include <numbers>
#include <utility>

#include "sqpcd/convex_query.h"

namespace sqpcd {

void GaussianPosition::Validate() const {
  if (!mean.allFinite() || !cov.allFinite()) {
    throw std::invalid_argument("position belief must be finite");
  }
  if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw std::invalid_argument("covariance must be symmetric");
  }
  const double min_eig =
      Eigen::SelfAdjointEigenSolver<Mat3>(cov).eigenvalues()[0];
  if (min_eig < -1e-12) {
    throw std::invalid_argument("covariance must be positive semidefinite");
  }
}

Mat3 GaussianPosition::SqrtCov() const {
  Eigen::SelfAdjointEigenSolver<Mat3> es(0.5 * (cov + cov.transpose()));
  const Vec3 s = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * s.asDiagonal() * es.eigenvectors().transpose();
}

GaussianPosition RelativePositionError(const GaussianPosition& b1,
                                       const GaussianPosition& b2) {
  return GaussianPosition{b2.mean - b1.mean, b1.cov + b2.cov};
}

double KarcherResidual(const Mat3& mean, const std::vector<Mat3>& samples) {
  Vec3 sum = Vec3::Zero();
  for (const Mat3& r : samples) sum += LogSO3(mean.transpose() * r);
  // |hat(w)|_F = sqrt(2) |w|.
  return std::sqrt(2.0) * sum.norm();
}

Mat3 MeanRotation(const std::vector<Mat3>& samples) {
  if (samples.empty()) {
    throw std::invalid_argument("mean rotation of an empty sample set");
  }
  for (const Mat3& r : samples) {
    CheckRotation(r);
    if (GeodesicDistance(samples.front(), r) >= std::numbers::pi / 2) {
      throw std::invalid_argument(
          "rotation samples must lie within pi/2 of the first sample");
    }
  }
  constexpr int kMaxIterations = 100;
  constexpr double kTolerance = 1e-8;
  Mat3 mean = samples.front();
  const double m = static_cast<double>(samples.size());
  for (int it = 0; it < kMaxIterations; ++it) {
    Vec3 sum = Vec3::Zero();
    for (const Mat3& r : samples) sum += LogSO3(mean.transpose() * r);
    if (std::sqrt(2.0) * sum.norm() <= 0.1 * kTolerance) return mean;
    mean = ProjectToSO3(mean * ExpSO3(sum / m));
  }
  if (KarcherResidual(mean, samples) <= kTolerance) return mean;
  throw NumericalError("mean rotation did not converge in 100 iterations");
}

RotationBelief RotationBelief::FromSamples(std::vector<Mat3> samples) {
  RotationBelief b;
  b.mean = MeanRotation(samples);
  b.samples = std::move(samples);
  return b;
}

RotationBelief RotationBelief::Exact(const Mat3& rotation) {
  CheckRotation(rotation);
  return RotationBelief{{rotation}, rotation};
}

EnlargedBody::EnlargedBody(Superquadric shape, std::vector<Mat3> rotations,
                           double c, const Vec3& center)
    : shape_(std::move(shape)),
      rotations_(std::move(rotations)),
      c_(c),
      center_(center) {
  if (rotations_.empty()) {
    throw std::invalid_argument("enlarged body needs at least one rotation");
  }
  if (!(c_ > 0.0) || !std::isfinite(c_)) {
    throw std::invalid_argument("enlargement constant c must be positive");
  }
}

Vec3 EnlargedBody::Support(const Vec3& direction) const {
  Vec3 sum = Vec3::Zero();
  for (const Mat3& r : rotations_) {
    sum += r * shape_.SupportPoint(r.transpose() * direction);
  }
  return center_ + (c_ / static_cast<double>(rotations_.size())) * sum;
}

Vec3 EnlargedSupportPoint(const Superquadric& sq, const RotationBelief& rot,
                          double c, const Vec3& n) {
  if (!n.allFinite() || std::abs(n.norm() - 1.0) > 1e-9) {
    throw std::invalid_argument("normal must be a unit vector");
  }
  return EnlargedBody(sq, rot.samples, c).Support(n);
}

double EncapsulationFraction(const Superquadric& sq, const RotationBelief& rot,
                             double c, int n_samples, Rng& rng) {
  if (n_samples < 1) throw std::invalid_argument("n_samples must be >= 1");
  const EnlargedBody enlarged(sq, rot.samples, c);
  GjkOptions opts;
  opts.touch_tolerance = 1e-9 * (1.0 + enlarged.BoundingRadius());
  long inside = 0;
  long total = 0;
  for (const Mat3& r : rot.samples) {
    for (int i = 0; i < n_samples; ++i) {
      const Vec3 p = r * sq.SupportPoint(UniformUnitVector(rng));
      if (PointProximity(enlarged, p, opts).inside) ++inside;
      ++total;
    }
  }
  return static_cast<double>(inside) / static_cast<double>(total);
}

}  // namespace sqpcd
