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

#ifndef SQPCD_CONVEX_QUERY_H_
#define SQPCD_CONVEX_QUERY_H_

#include <vector>

#include "sqpcd/support_body.h"

namespace sqpcd {

// Distance from a point to a convex body computed by GJK on the support map
// of (body - point).
struct ProximityResult {
  // True if the point lies inside (or on) the body.
  bool inside = false;
  // Euclidean distance; zero when inside.
  double distance = 0.0;
  // Nearest body point (meaningful only when outside).
  Vec3 nearest = Vec3::Zero();
  // Outward unit normal of the supporting plane at `nearest`, pointing
  // towards the query point (meaningful only when outside).
  Vec3 normal = Vec3::UnitX();
  int iterations = 0;
  bool converged = false;
};

struct GjkOptions {
  int max_iterations = 200;
  // Relative duality-gap tolerance on the squared distance.
  double relative_tolerance = 1e-12;
  // Stop as soon as the point is proven outside (boolean queries).
  bool early_exit = false;
  // Points closer than this to the body count as inside.
  double touch_tolerance = 0.0;
};

ProximityResult PointProximity(const SupportBody& body, const Vec3& p,
                               const GjkOptions& options = {});

struct ContainmentResult {
  bool inside = false;
  bool converged = false;
};

// Membership test: p violates no supporting half-space of `body`.
ContainmentResult Contains(const SupportBody& body, const Vec3& p);

// max over unit n of [n . p - h(n)] and its maximizer. Positive values are
// the Euclidean distance to the body; values <= 0 mean p is inside and the
// magnitude is the penetration depth.
struct SupportDistanceResult {
  double value = 0.0;
  Vec3 normal = Vec3::UnitX();
  bool converged = false;
};

SupportDistanceResult SupportDistance(const SupportBody& body, const Vec3& p);

// The eight deterministic multi-start angles used by every angle-space
// optimizer: the octant diagonals of the unit sphere.
const std::vector<SurfaceAngles>& MultiStartAngles();

}  // namespace sqpcd

#endif  // SQPCD_CONVEX_QUERY_H_
