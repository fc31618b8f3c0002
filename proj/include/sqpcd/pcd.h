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

#ifndef SQPCD_PCD_H_
#define SQPCD_PCD_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "sqpcd/superquadric.h"
#include "sqpcd/support_body.h"
#include "sqpcd/trust_region.h"
#include "sqpcd/uncertainty.h"

namespace sqpcd {

enum class PcdMethod {
  kMcSingle,
  kMcDouble,
  kMcPose,
  kLccCenter,
  kLccTangent,
  kHLcc,
  kDeterministic,
};

// Snake-case identifier ("lcc_tangent", ...).
std::string_view MethodName(PcdMethod method);
// Accepts snake_case or kebab-case names; nullopt if unknown.
std::optional<PcdMethod> ParseMethod(std::string_view name);

// Half-space a^T t - b < 0 with unit normal a.
struct HalfSpace {
  Vec3 normal = Vec3::UnitX();
  double offset = 0.0;
};

struct PcdResult {
  // Always within [0, 1]; bounds above 1 are truncated.
  double probability = 0.0;
  PcdMethod method = PcdMethod::kDeterministic;
  std::optional<HalfSpace> halfspace;
  double wall_time_s = 0.0;
  std::optional<double> mc_std_error;
  // The relative mean lies inside the collision region.
  bool mean_inside = false;
  // h_lcc answered from the ellipsoid screen.
  bool screened = false;
  // lcc_tangent optimizer failed on every start; lcc_center plane used.
  bool fallback = false;
};

// One body's shape, pose belief and enlargement constant.
struct BodyBelief {
  Superquadric shape;
  PoseBelief belief;
  double enlargement_c = 1.0;
  // Cached ellipsoid containing `shape` for the h_lcc screen. Computed on
  // demand when absent.
  std::optional<Superquadric> screen_ellipsoid;

  // Validates the beliefs and c > 0.
  void Validate() const;

  // Same body with its orientation fixed at the mean and c = 1.
  BodyBelief PositionOnly() const;
  // Same body with `screen_ellipsoid` filled in.
  BodyBelief WithScreenEllipsoid() const;

  // Enlarged surface centered at the origin (positions are handled by the
  // relative position error).
  EnlargedBody Enlarged() const;
};

// Minkowski body S1_ub (+) (-S2_ub) centered at the origin.
MinkowskiDifference EnlargedMinkowski(const BodyBelief& b1,
                                      const BodyBelief& b2);

// F_y(0) for y = a^T t - b, t ~ rel: Phi((b - a^T p) / sqrt(a^T S a)).
// A variance below 1e-30 along a yields the indicator a^T p - b < 0.
double ChanceBoundFromHalfSpace(const HalfSpace& hs,
                                const GaussianPosition& rel);

// Symmetric inverse square root; eigenvalues are raised to 1e-12 first.
Mat3 InverseSqrtCovariance(const Mat3& cov);

// Half-space normal along the relative mean direction.
PcdResult LccCenter(const BodyBelief& b1, const BodyBelief& b2);

struct LccTangentOptions {
  TrustRegionOptions trust_region;
  // Gradient norm above which the octant multi-start is run.
  double restart_gradient = 1e-6;
  // Also compute the whitened nearest point with GJK and keep the tighter of
  // the two supporting planes.
  bool nearest_point_refinement = true;
};

// Tangent half-space at the whitened nearest point of the enlarged Minkowski
// body.
PcdResult LccTangent(const BodyBelief& b1, const BodyBelief& b2,
                     const LccTangentOptions& options = {});

// Hierarchical check: lcc_center on enclosing ellipsoids first, lcc_tangent
// on the superquadrics when the screen is not below delta.
PcdResult HLcc(const BodyBelief& b1, const BodyBelief& b2, double delta,
               const LccTangentOptions& options = {});

// Collision at the mean poses of the plain shapes (0 or 1).
PcdResult DeterministicCheck(const BodyBelief& b1, const BodyBelief& b2);

// True when two posed superquadrics intersect (boundary contact counts).
bool PosedOverlap(const PosedSuperquadric& a, const PosedSuperquadric& b);

inline constexpr int kMcSingleSamples = 10000;
inline constexpr int kMcDoubleSamples = 100000;

// Monte-Carlo oracle with body 1 fixed and body 2 translated by its position
// belief; body 2's orientation is its mean.
PcdResult McSingle(const PosedSuperquadric& fixed, const BodyBelief& b2,
                   int n = kMcSingleSamples, std::uint64_t seed = 0);

// Monte-Carlo oracle over the relative position error t21 ~ N(p21, S1 + S2),
// orientations fixed at the means.
PcdResult McDouble(const BodyBelief& b1, const BodyBelief& b2,
                   int n = kMcDoubleSamples, std::uint64_t seed = 0);

// Monte-Carlo oracle over full poses: rotation drawn uniformly from each
// sample set, translation from each Gaussian.
PcdResult McPose(const BodyBelief& b1, const BodyBelief& b2,
                 int n = kMcDoubleSamples, std::uint64_t seed = 0);

}  // namespace sqpcd

#endif  // SQPCD_PCD_H_
