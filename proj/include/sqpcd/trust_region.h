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

#ifndef SQPCD_TRUST_REGION_H_
#define SQPCD_TRUST_REGION_H_

#include <functional>

#include <Eigen/Dense>

namespace sqpcd {

struct TrustRegionOptions {
  int max_iterations = 60;
  // Stop once a step is shorter than this (relative to 1 + |x|).
  double step_tolerance = 1e-10;
  // Forward-difference step for the Jacobian.
  double fd_step = 1e-7;
};

struct TrustRegionResult {
  Eigen::Vector2d x = Eigen::Vector2d::Zero();
  double cost = 0.0;
  double gradient_norm = 0.0;
  int iterations = 0;
  bool converged = false;
};

using Residual3Fn = std::function<Eigen::Vector3d(const Eigen::Vector2d&)>;
using Scalar2Fn = std::function<double(const Eigen::Vector2d&)>;

// Levenberg-Marquardt with adaptive damping (the damping factor acts as an
// inverse trust-region radius) for min 1/2 |r(x)|^2, x in R^2, r in R^3.
TrustRegionResult MinimizeLeastSquares(const Residual3Fn& residual,
                                       const Eigen::Vector2d& x0,
                                       const TrustRegionOptions& options = {});

// Damped-Newton trust-region minimizer for a smooth scalar function of two
// variables. Gradient and Hessian come from central differences.
TrustRegionResult MinimizeScalar(const Scalar2Fn& f, const Eigen::Vector2d& x0,
                                 const TrustRegionOptions& options = {});

}  // namespace sqpcd

#endif  // SQPCD_TRUST_REGION_H_
