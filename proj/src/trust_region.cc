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

#include "sqpcd/trust_region.h"

#include <algorithm>
#include <cmath>

namespace sqpcd {
namespace {

using Eigen::Matrix2d;
using Eigen::Vector2d;
using Eigen::Vector3d;
using Jacobian = Eigen::Matrix<double, 3, 2>;

Jacobian ForwardJacobian(const Residual3Fn& residual, const Vector2d& x,
                         const Vector3d& r0, double step) {
  Jacobian j;
  for (int k = 0; k < 2; ++k) {
    Vector2d xp = x;
    const double h = step * std::max(1.0, std::abs(x[k]));
    xp[k] += h;
    j.col(k) = (residual(xp) - r0) / h;
  }
  return j;
}

// Nielsen's damping update after a step with gain ratio rho.
void UpdateDamping(bool accepted, double rho, double* lambda, double* nu) {
  if (accepted) {
    const double t = 2.0 * rho - 1.0;
    *lambda *= std::max(1.0 / 3.0, 1.0 - t * t * t);
    *nu = 2.0;
  } else {
    *lambda *= *nu;
    *nu *= 2.0;
  }
}

}  // namespace

TrustRegionResult MinimizeLeastSquares(const Residual3Fn& residual,
                                       const Vector2d& x0,
                                       const TrustRegionOptions& options) {
  TrustRegionResult out;
  Vector2d x = x0;
  Vector3d r = residual(x);
  double cost = 0.5 * r.squaredNorm();
  Jacobian j = ForwardJacobian(residual, x, r, options.fd_step);
  Matrix2d a = j.transpose() * j;
  Vector2d g = j.transpose() * r;
  double lambda = 1e-3 * std::max(a.diagonal().maxCoeff(), 1e-12);
  double nu = 2.0;

  int it = 0;
  for (; it < options.max_iterations; ++it) {
    if (g.lpNorm<Eigen::Infinity>() < 1e-15) {
      out.converged = true;
      break;
    }
    Matrix2d damped = a;
    damped.diagonal().array() += lambda;
    const Vector2d step = damped.ldlt().solve(-g);
    if (!step.allFinite()) break;
    if (step.norm() <= options.step_tolerance * (1.0 + x.norm())) {
      out.converged = true;
      break;
    }
    const Vector2d x_new = x + step;
    const Vector3d r_new = residual(x_new);
    const double cost_new = 0.5 * r_new.squaredNorm();
    const double predicted = -(g.dot(step) + 0.5 * step.dot(a * step));
    const double rho = predicted > 0.0 ? (cost - cost_new) / predicted : -1.0;
    const bool accepted = rho > 0.0 && std::isfinite(cost_new);
    if (accepted) {
      x = x_new;
      r = r_new;
      cost = cost_new;
      j = ForwardJacobian(residual, x, r, options.fd_step);
      a = j.transpose() * j;
      g = j.transpose() * r;
    }
    UpdateDamping(accepted, rho, &lambda, &nu);
    if (!std::isfinite(lambda) || lambda > 1e30) {
      // No descent direction left at machine precision.
      out.converged = true;
      break;
    }
  }
  out.x = x;
  out.cost = cost;
  out.gradient_norm = g.norm();
  out.iterations = it;
  return out;
}

TrustRegionResult MinimizeScalar(const Scalar2Fn& f, const Vector2d& x0,
                                 const TrustRegionOptions& options) {
  const double h = std::max(options.fd_step, 1e-5);
  auto derivatives = [&](const Vector2d& x, double fx, Vector2d* g,
                         Matrix2d* hess) {
    for (int k = 0; k < 2; ++k) {
      Vector2d xp = x, xm = x;
      xp[k] += h;
      xm[k] -= h;
      const double fp = f(xp);
      const double fm = f(xm);
      (*g)[k] = (fp - fm) / (2.0 * h);
      (*hess)(k, k) = (fp - 2.0 * fx + fm) / (h * h);
    }
    Vector2d pp = x, pm = x, mp = x, mm = x;
    pp << x[0] + h, x[1] + h;
    pm << x[0] + h, x[1] - h;
    mp << x[0] - h, x[1] + h;
    mm << x[0] - h, x[1] - h;
    const double off = (f(pp) - f(pm) - f(mp) + f(mm)) / (4.0 * h * h);
    (*hess)(0, 1) = (*hess)(1, 0) = off;
  };

  TrustRegionResult out;
  Vector2d x = x0;
  double fx = f(x);
  Vector2d g;
  Matrix2d hess;
  derivatives(x, fx, &g, &hess);
  double lambda = 1e-3 * std::max(hess.diagonal().cwiseAbs().maxCoeff(), 1.0);
  double nu = 2.0;

  int it = 0;
  for (; it < options.max_iterations; ++it) {
    // Shift the model Hessian until it is positive definite.
    Matrix2d model = hess;
    const double min_eig =
        Eigen::SelfAdjointEigenSolver<Matrix2d>(hess).eigenvalues()[0];
    const double shift = lambda + std::max(0.0, -min_eig);
    model.diagonal().array() += shift;
    const Vector2d step = model.ldlt().solve(-g);
    if (!step.allFinite()) break;
    if (step.norm() <= options.step_tolerance * (1.0 + x.norm())) {
      out.converged = true;
      break;
    }
    const Vector2d x_new = x + step;
    const double f_new = f(x_new);
    const double predicted = -(g.dot(step) + 0.5 * step.dot(hess * step));
    const double rho = predicted > 0.0 ? (fx - f_new) / predicted : -1.0;
    const bool accepted = (rho > 0.0 || (predicted <= 0.0 && f_new < fx)) &&
                          std::isfinite(f_new);
    if (accepted) {
      x = x_new;
      fx = f_new;
      derivatives(x, fx, &g, &hess);
    }
    UpdateDamping(accepted, std::max(rho, 0.0), &lambda, &nu);
    if (!std::isfinite(lambda) || lambda > 1e30) {
      out.converged = true;
      break;
    }
  }
  out.x = x;
  out.cost = fx;
  out.gradient_norm = g.norm();
  out.iterations = it;
  return out;
}

}  // namespace sqpcd
