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

#include "sqpcd/convex_query.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "sqpcd/trust_region.h"

namespace sqpcd {
namespace {

struct Simplex {
  std::array<Vec3, 4> pts;
  int size = 0;

  void Push(const Vec3& p) { pts[size++] = p; }
  void Set(std::initializer_list<Vec3> ps) {
    size = 0;
    for (const Vec3& p : ps) pts[size++] = p;
  }
};

// Closest point to the origin on triangle abc (Ericson, RTCD 5.1.5). The
// simplex is reduced to the feature that contains the closest point. The
// vertices are taken by value because they may alias the simplex storage.
Vec3 ClosestOnTriangle(const Vec3 a, const Vec3 b, const Vec3 c, Simplex* s) {
  const Vec3 ab = b - a;
  const Vec3 ac = c - a;
  const Vec3 ap = -a;
  const double d1 = ab.dot(ap);
  const double d2 = ac.dot(ap);
  if (d1 <= 0.0 && d2 <= 0.0) {
    s->Set({a});
    return a;
  }
  const Vec3 bp = -b;
  const double d3 = ab.dot(bp);
  const double d4 = ac.dot(bp);
  if (d3 >= 0.0 && d4 <= d3) {
    s->Set({b});
    return b;
  }
  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) {
    const double v = d1 / (d1 - d3);
    s->Set({a, b});
    return a + v * ab;
  }
  const Vec3 cp = -c;
  const double d5 = ab.dot(cp);
  const double d6 = ac.dot(cp);
  if (d6 >= 0.0 && d5 <= d6) {
    s->Set({c});
    return c;
  }
  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) {
    const double w = d2 / (d2 - d6);
    s->Set({a, c});
    return a + w * ac;
  }
  const double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
    const double w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
    s->Set({b, c});
    return b + w * (c - b);
  }
  const double denom = 1.0 / (va + vb + vc);
  const double v = vb * denom;
  const double w = vc * denom;
  s->Set({a, b, c});
  return a + ab * v + ac * w;
}

Vec3 ClosestOnSegment(const Vec3 a, const Vec3 b, Simplex* s) {
  const Vec3 ab = b - a;
  const double len2 = ab.squaredNorm();
  const double t = len2 > 0.0 ? -a.dot(ab) / len2 : 0.0;
  if (t <= 0.0) {
    s->Set({a});
    return a;
  }
  if (t >= 1.0) {
    s->Set({b});
    return b;
  }
  return a + t * ab;
}

// Returns true if the origin lies on the opposite side of plane abc from d.
bool OriginOutsideFace(const Vec3& a, const Vec3& b, const Vec3& c,
                       const Vec3& d) {
  const Vec3 n = (b - a).cross(c - a);
  const double sign_origin = -a.dot(n);
  const double sign_d = (d - a).dot(n);
  return sign_origin * sign_d < 0.0;
}

// Closest point on the current simplex; sets *enclosed when the origin is
// inside a tetrahedron.
Vec3 ClosestOnSimplex(Simplex* s, bool* enclosed) {
  *enclosed = false;
  switch (s->size) {
    case 1:
      return s->pts[0];
    case 2:
      return ClosestOnSegment(s->pts[0], s->pts[1], s);
    case 3:
      return ClosestOnTriangle(s->pts[0], s->pts[1], s->pts[2], s);
    default: {
      const Vec3 a = s->pts[0], b = s->pts[1], c = s->pts[2], d = s->pts[3];
      const std::array<std::array<Vec3, 4>, 4> faces = {{{a, b, c, d},
                                                         {a, c, d, b},
                                                         {a, d, b, c},
                                                         {b, d, c, a}}};
      double best = std::numeric_limits<double>::infinity();
      Vec3 best_point = Vec3::Zero();
      Simplex best_simplex;
      bool any_outside = false;
      for (const auto& f : faces) {
        if (!OriginOutsideFace(f[0], f[1], f[2], f[3])) continue;
        any_outside = true;
        Simplex cand;
        const Vec3 q = ClosestOnTriangle(f[0], f[1], f[2], &cand);
        if (q.squaredNorm() < best) {
          best = q.squaredNorm();
          best_point = q;
          best_simplex = cand;
        }
      }
      if (!any_outside) {
        *enclosed = true;
        return Vec3::Zero();
      }
      *s = best_simplex;
      return best_point;
    }
  }
}

}  // namespace

ProximityResult PointProximity(const SupportBody& body, const Vec3& p,
                               const GjkOptions& options) {
  ProximityResult out;
  const double scale = std::max(1.0, body.BoundingRadius() + (body.Center() - p).norm());
  const double zero_tol = std::max(1e-13 * scale, options.touch_tolerance);

  auto support = [&](const Vec3& d) { return Vec3(body.Support(d) - p); };

  Vec3 v = body.Center() - p;
  if (v.norm() <= zero_tol) {
    out.inside = true;
    out.converged = true;
    return out;
  }
  Simplex simplex;
  v = support(-v);
  simplex.Push(v);

  int it = 0;
  for (; it < options.max_iterations; ++it) {
    const double v_sq = v.squaredNorm();
    if (v_sq <= zero_tol * zero_tol) {
      out.inside = true;
      out.converged = true;
      break;
    }
    const Vec3 w = support(-v);
    const double vw = v.dot(w);
    if (options.early_exit && vw > 0.0) {
      // Separating plane found.
      out.inside = false;
      out.distance = std::sqrt(v_sq);
      out.converged = true;
      break;
    }
    if (v_sq - vw <= options.relative_tolerance * v_sq) {
      out.converged = true;
      break;
    }
    bool duplicate = false;
    for (int i = 0; i < simplex.size; ++i) {
      if ((simplex.pts[i] - w).squaredNorm() <= 1e-24 * scale * scale) {
        duplicate = true;
      }
    }
    if (duplicate) {
      out.converged = true;
      break;
    }
    const Simplex previous = simplex;
    simplex.Push(w);
    bool enclosed = false;
    const Vec3 v_new = ClosestOnSimplex(&simplex, &enclosed);
    if (enclosed) {
      out.inside = true;
      out.converged = true;
      break;
    }
    if (v_new.squaredNorm() >= v_sq) {
      // No progress: numerical floor reached.
      simplex = previous;
      out.converged = true;
      break;
    }
    v = v_new;
  }
  out.iterations = it;
  if (!out.inside) {
    const double d = v.norm();
    if (d <= zero_tol) {
      out.inside = true;
    } else {
      out.distance = d;
      out.nearest = v + p;
      out.normal = -v / d;
    }
  }
  if (out.inside) {
    out.distance = 0.0;
  }
  return out;
}

ContainmentResult Contains(const SupportBody& body, const Vec3& p) {
  GjkOptions opts;
  opts.early_exit = true;
  opts.max_iterations = 64;
  const ProximityResult r = PointProximity(body, p, opts);
  if (r.converged) return {r.inside, true};
  // Fall back to an exact distance run before reporting.
  const ProximityResult full = PointProximity(body, p);
  return {full.inside, full.converged};
}

const std::vector<SurfaceAngles>& MultiStartAngles() {
  static const std::vector<SurfaceAngles> kStarts = [] {
    std::vector<SurfaceAngles> s;
    for (int sz : {-1, 1}) {
      for (int sy : {-1, 1}) {
        for (int sx : {-1, 1}) {
          s.push_back(SurfaceAngles::FromDirection(Vec3(sx, sy, sz)));
        }
      }
    }
    return s;
  }();
  return kStarts;
}

SupportDistanceResult SupportDistance(const SupportBody& body, const Vec3& p) {
  const ProximityResult prox = PointProximity(body, p);
  if (!prox.inside) {
    return {prox.distance, prox.normal, prox.converged};
  }
  // Inside: maximize n . p - h(n) over the angle parameterization, i.e.
  // minimize the support gap, from the octant multi-start set.
  const Scalar2Fn gap = [&](const Eigen::Vector2d& psi) {
    const Vec3 n = SurfaceAngles{psi[0], psi[1]}.Normal();
    return body.SupportValue(n) - n.dot(p);
  };
  SupportDistanceResult best;
  best.value = -std::numeric_limits<double>::infinity();
  for (const SurfaceAngles& start : MultiStartAngles()) {
    const TrustRegionResult r =
        MinimizeScalar(gap, Eigen::Vector2d(start.latitude, start.longitude));
    if (-r.cost > best.value) {
      best.value = -r.cost;
      best.normal = SurfaceAngles{r.x[0], r.x[1]}.Normal();
      best.converged = r.converged;
    }
  }
  best.value = std::min(best.value, 0.0);
  return best;
}

}  // namespace sqpcd
