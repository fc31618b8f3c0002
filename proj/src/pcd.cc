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

#include "sqpcd/pcd.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <memory>
#include <vector>

#include "sqpcd/convex_query.h"

namespace sqpcd {
namespace {

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double StandardNormalCdf(double x) {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

PcdResult Finish(double probability, PcdMethod method,
                 Clock::time_point start) {
  PcdResult r;
  r.probability = std::clamp(probability, 0.0, 1.0);
  r.method = method;
  r.wall_time_s = Seconds(start);
  return r;
}

// Support map of two posed bodies' Minkowski difference without allocation;
// used by the Monte-Carlo inner loops.
class PairDifference final : public SupportBody {
 public:
  PairDifference(const PosedSuperquadric& a, const PosedSuperquadric& b)
      : a_(a), b_(b) {}
  Vec3 Support(const Vec3& d) const override {
    return a_.Support(d) - b_.Support(-d);
  }
  Vec3 Center() const override { return a_.Center() - b_.Center(); }
  double BoundingRadius() const override {
    return a_.BoundingRadius() + b_.BoundingRadius();
  }

 private:
  const PosedSuperquadric& a_;
  const PosedSuperquadric& b_;
};

// Membership with a bounding-sphere reject in front of GJK.
bool Collides(const SupportBody& body, const Vec3& p) {
  if ((p - body.Center()).squaredNorm() >
      body.BoundingRadius() * body.BoundingRadius()) {
    return false;
  }
  return Contains(body, p).inside;
}

PcdResult FinishMonteCarlo(long hits, int n, PcdMethod method,
                           Clock::time_point start) {
  const double p = static_cast<double>(hits) / static_cast<double>(n);
  PcdResult r = Finish(p, method, start);
  r.mc_std_error = std::sqrt(p * (1.0 - p) / static_cast<double>(n));
  return r;
}

// A mean on or beyond the center-direction plane is not strictly inside;
// otherwise ask GJK.
bool MeanStrictlyInside(const SupportBody& body, const HalfSpace& center_plane,
                        const Vec3& mean) {
  if (center_plane.normal.dot(mean) >= center_plane.offset) return false;
  return Contains(body, mean).inside;
}

struct Candidate {
  HalfSpace hs;
  double bound = std::numeric_limits<double>::infinity();
  bool converged = false;
};

Candidate FromNormal(const SupportBody& body, const Vec3& normal,
                     const GaussianPosition& rel, bool converged) {
  Candidate c;
  c.hs.normal = normal.normalized();
  c.hs.offset = body.SupportValue(c.hs.normal);
  c.bound = ChanceBoundFromHalfSpace(c.hs, rel);
  c.converged = converged;
  return c;
}

// Monte Carlo estimates draw their samples in a canonical body order so the
// estimate is exactly unchanged when the two bodies are relabeled.
std::vector<double> OrderKey(const BodyBelief& b) {
  std::vector<double> key;
  const auto append = [&key](const auto& m) {
    key.insert(key.end(), m.data(), m.data() + m.size());
  };
  append(b.belief.position.mean);
  append(b.belief.position.cov);
  append(b.shape.semi_axes());
  append(b.shape.eps());
  append(b.belief.rotation.mean);
  key.push_back(b.enlargement_c);
  key.push_back(static_cast<double>(b.belief.rotation.size()));
  return key;
}

bool InCanonicalOrder(const BodyBelief& b1, const BodyBelief& b2) {
  return !(OrderKey(b2) < OrderKey(b1));
}

}  // namespace

std::string_view MethodName(PcdMethod method) {
  switch (method) {
    case PcdMethod::kMcSingle: return "mc_single";
    case PcdMethod::kMcDouble: return "mc_double";
    case PcdMethod::kMcPose: return "mc_pose";
    case PcdMethod::kLccCenter: return "lcc_center";
    case PcdMethod::kLccTangent: return "lcc_tangent";
    case PcdMethod::kHLcc: return "h_lcc";
    case PcdMethod::kDeterministic: return "deterministic";
  }
  return "unknown";
}

std::optional<PcdMethod> ParseMethod(std::string_view name) {
  std::string s(name);
  std::replace(s.begin(), s.end(), '-', '_');
  for (PcdMethod m :
       {PcdMethod::kMcSingle, PcdMethod::kMcDouble, PcdMethod::kMcPose,
        PcdMethod::kLccCenter, PcdMethod::kLccTangent, PcdMethod::kHLcc,
        PcdMethod::kDeterministic}) {
    if (MethodName(m) == s) return m;
  }
  return std::nullopt;
}

void BodyBelief::Validate() const {
  belief.position.Validate();
  if (belief.rotation.samples.empty()) {
    throw std::invalid_argument("rotation belief needs at least one sample");
  }
  CheckRotation(belief.rotation.mean);
  for (const Mat3& r : belief.rotation.samples) CheckRotation(r);
  if (!(enlargement_c > 0.0) || !std::isfinite(enlargement_c)) {
    throw std::invalid_argument("enlargement constant c must be positive");
  }
}

BodyBelief BodyBelief::PositionOnly() const {
  BodyBelief b = *this;
  b.belief.rotation = RotationBelief::Exact(belief.rotation.mean);
  b.enlargement_c = 1.0;
  return b;
}

BodyBelief BodyBelief::WithScreenEllipsoid() const {
  BodyBelief b = *this;
  if (!b.screen_ellipsoid) b.screen_ellipsoid = shape.EnclosingEllipsoid();
  return b;
}

EnlargedBody BodyBelief::Enlarged() const {
  return EnlargedBody(shape, belief.rotation.samples, enlargement_c);
}

MinkowskiDifference EnlargedMinkowski(const BodyBelief& b1,
                                      const BodyBelief& b2) {
  return MinkowskiDifference(std::make_shared<EnlargedBody>(b1.Enlarged()),
                             std::make_shared<EnlargedBody>(b2.Enlarged()));
}

double ChanceBoundFromHalfSpace(const HalfSpace& hs,
                                const GaussianPosition& rel) {
  const double mean_y = hs.normal.dot(rel.mean) - hs.offset;
  const double var = hs.normal.dot(rel.cov * hs.normal);
  if (!(var > 1e-30)) return mean_y < 0.0 ? 1.0 : 0.0;
  return std::clamp(StandardNormalCdf(-mean_y / std::sqrt(var)), 0.0, 1.0);
}

Mat3 InverseSqrtCovariance(const Mat3& cov) {
  Eigen::SelfAdjointEigenSolver<Mat3> es(0.5 * (cov + cov.transpose()));
  const Vec3 inv = es.eigenvalues().cwiseMax(1e-12).cwiseSqrt().cwiseInverse();
  return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
}

PcdResult LccCenter(const BodyBelief& b1, const BodyBelief& b2) {
  const auto start = Clock::now();
  const GaussianPosition rel =
      RelativePositionError(b1.belief.position, b2.belief.position);
  const double dist = rel.mean.norm();
  if (!(dist > 0.0)) {
    PcdResult r = Finish(1.0, PcdMethod::kLccCenter, start);
    r.mean_inside = true;
    return r;
  }
  const MinkowskiDifference body = EnlargedMinkowski(b1, b2);
  HalfSpace hs;
  hs.normal = rel.mean / dist;
  hs.offset = body.SupportValue(hs.normal);
  if (MeanStrictlyInside(body, hs, rel.mean)) {
    PcdResult r = Finish(1.0, PcdMethod::kLccCenter, start);
    r.mean_inside = true;
    return r;
  }
  PcdResult r =
      Finish(ChanceBoundFromHalfSpace(hs, rel), PcdMethod::kLccCenter, start);
  r.halfspace = hs;
  return r;
}

PcdResult LccTangent(const BodyBelief& b1, const BodyBelief& b2,
                     const LccTangentOptions& options) {
  const auto start = Clock::now();
  const GaussianPosition rel =
      RelativePositionError(b1.belief.position, b2.belief.position);
  const auto body = std::make_shared<MinkowskiDifference>(
      EnlargedMinkowski(b1, b2));

  HalfSpace center_plane;
  center_plane.normal = rel.mean.norm() > 0.0 ? Vec3(rel.mean.normalized())
                                              : Vec3(Vec3::UnitX());
  center_plane.offset = body->SupportValue(center_plane.normal);
  if (rel.mean.norm() == 0.0 ||
      MeanStrictlyInside(*body, center_plane, rel.mean)) {
    PcdResult r = Finish(1.0, PcdMethod::kLccTangent, start);
    r.mean_inside = true;
    return r;
  }

  const Mat3 whiten = InverseSqrtCovariance(rel.cov);
  const Vec3 p_white = whiten * rel.mean;
  // Normals are parameterized in the frame of body 1's mean rotation so the
  // initial angles are those of the whitened mean seen from body 1.
  const Mat3& r1 = b1.belief.rotation.mean;
  auto normal_at = [&](const Eigen::Vector2d& psi) {
    return Vec3(r1 * SurfaceAngles{psi[0], psi[1]}.Normal());
  };
  const Residual3Fn residual = [&](const Eigen::Vector2d& psi) {
    return Vec3(p_white - whiten * body->Support(normal_at(psi)));
  };

  // The whitened nearest point (GJK) gives the optimal supporting plane of
  // the convex body; its normal warm-starts the angle search. Without it the
  // search starts from the whitened mean direction.
  std::optional<Candidate> nearest;
  Vec3 start_direction = p_white;
  if (options.nearest_point_refinement) {
    const LinearTransformedBody white_body(body, whiten);
    const ProximityResult prox = PointProximity(white_body, p_white);
    if (!prox.inside) {
      nearest = FromNormal(*body, whiten * prox.normal, rel, prox.converged);
      if (prox.converged) start_direction = whiten * prox.normal;
    }
  }
  const SurfaceAngles psi0 =
      SurfaceAngles::FromDirection(r1.transpose() * start_direction);
  TrustRegionResult best = MinimizeLeastSquares(
      residual, Eigen::Vector2d(psi0.latitude, psi0.longitude),
      options.trust_region);
  if (best.gradient_norm > options.restart_gradient) {
    for (const SurfaceAngles& s : MultiStartAngles()) {
      const TrustRegionResult r = MinimizeLeastSquares(
          residual, Eigen::Vector2d(s.latitude, s.longitude),
          options.trust_region);
      if (r.cost < best.cost) best = r;
    }
  }
  const bool lm_converged =
      best.converged || best.gradient_norm <= options.restart_gradient;
  Candidate chosen = FromNormal(*body, normal_at(best.x), rel, lm_converged);
  if (nearest && (nearest->bound < chosen.bound ||
                  (!chosen.converged && nearest->converged))) {
    chosen = *nearest;
  }

  PcdResult r;
  if (!chosen.converged) {
    // Every start failed: fall back to the center-direction plane if tighter.
    const Candidate center = FromNormal(*body, rel.mean, rel, true);
    if (center.bound < chosen.bound) chosen = center;
    r.fallback = true;
  }
  const bool fallback = r.fallback;
  r = Finish(chosen.bound, PcdMethod::kLccTangent, start);
  r.fallback = fallback;
  r.halfspace = chosen.hs;
  return r;
}

PcdResult HLcc(const BodyBelief& b1, const BodyBelief& b2, double delta,
               const LccTangentOptions& options) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("h_lcc threshold delta must lie in (0, 1)");
  }
  const auto start = Clock::now();
  auto ellipsoidal = [](const BodyBelief& b) {
    BodyBelief e = b;
    e.shape = b.screen_ellipsoid ? *b.screen_ellipsoid
                                 : b.shape.EnclosingEllipsoid();
    return e;
  };
  const PcdResult screen = LccCenter(ellipsoidal(b1), ellipsoidal(b2));
  if (screen.probability < delta) {
    PcdResult r = screen;
    r.method = PcdMethod::kHLcc;
    r.screened = true;
    r.wall_time_s = Seconds(start);
    return r;
  }
  PcdResult r = LccTangent(b1, b2, options);
  r.method = PcdMethod::kHLcc;
  r.wall_time_s = Seconds(start);
  return r;
}

PcdResult DeterministicCheck(const BodyBelief& b1, const BodyBelief& b2) {
  const auto start = Clock::now();
  const PosedSuperquadric s1(b1.shape, Pose{b1.belief.rotation.mean, Vec3::Zero()});
  const PosedSuperquadric s2(b2.shape, Pose{b2.belief.rotation.mean, Vec3::Zero()});
  const Vec3 rel = b2.belief.position.mean - b1.belief.position.mean;
  const bool hit = Collides(PairDifference(s1, s2), rel);
  PcdResult r = Finish(hit ? 1.0 : 0.0, PcdMethod::kDeterministic, start);
  r.mean_inside = hit;
  return r;
}

bool PosedOverlap(const PosedSuperquadric& a, const PosedSuperquadric& b) {
  const PosedSuperquadric a0(a.shape(), Pose{a.pose().rotation, Vec3::Zero()});
  const PosedSuperquadric b0(b.shape(), Pose{b.pose().rotation, Vec3::Zero()});
  return Collides(PairDifference(a0, b0),
                  b.pose().translation - a.pose().translation);
}

PcdResult McSingle(const PosedSuperquadric& fixed, const BodyBelief& b2,
                   int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sample count must be >= 1");
  const auto start = Clock::now();
  Rng rng = MakeRng(seed);
  const PosedSuperquadric s1(fixed.shape(), Pose{fixed.pose().rotation, Vec3::Zero()});
  const PosedSuperquadric s2(b2.shape, Pose{b2.belief.rotation.mean, Vec3::Zero()});
  const PairDifference body(s1, s2);
  const Mat3 root = b2.belief.position.SqrtCov();
  long hits = 0;
  for (int i = 0; i < n; ++i) {
    const Vec3 t2 = b2.belief.position.mean + root * StandardNormal3(rng);
    if (Collides(body, t2 - fixed.pose().translation)) ++hits;
  }
  return FinishMonteCarlo(hits, n, PcdMethod::kMcSingle, start);
}

PcdResult McDouble(const BodyBelief& b1, const BodyBelief& b2, int n,
                   std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sample count must be >= 1");
  if (!InCanonicalOrder(b1, b2)) return McDouble(b2, b1, n, seed);
  const auto start = Clock::now();
  Rng rng = MakeRng(seed);
  const PosedSuperquadric s1(b1.shape, Pose{b1.belief.rotation.mean, Vec3::Zero()});
  const PosedSuperquadric s2(b2.shape, Pose{b2.belief.rotation.mean, Vec3::Zero()});
  const PairDifference body(s1, s2);
  const GaussianPosition rel =
      RelativePositionError(b1.belief.position, b2.belief.position);
  const Mat3 root = rel.SqrtCov();
  long hits = 0;
  for (int i = 0; i < n; ++i) {
    if (Collides(body, rel.mean + root * StandardNormal3(rng))) ++hits;
  }
  return FinishMonteCarlo(hits, n, PcdMethod::kMcDouble, start);
}

PcdResult McPose(const BodyBelief& b1, const BodyBelief& b2, int n,
                 std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sample count must be >= 1");
  if (!InCanonicalOrder(b1, b2)) return McPose(b2, b1, n, seed);
  const auto start = Clock::now();
  Rng rng = MakeRng(seed);
  std::vector<PosedSuperquadric> copies1, copies2;
  for (const Mat3& r : b1.belief.rotation.samples) {
    copies1.emplace_back(b1.shape, Pose{r, Vec3::Zero()});
  }
  for (const Mat3& r : b2.belief.rotation.samples) {
    copies2.emplace_back(b2.shape, Pose{r, Vec3::Zero()});
  }
  std::uniform_int_distribution<std::size_t> pick1(0, copies1.size() - 1);
  std::uniform_int_distribution<std::size_t> pick2(0, copies2.size() - 1);
  const Mat3 root1 = b1.belief.position.SqrtCov();
  const Mat3 root2 = b2.belief.position.SqrtCov();
  long hits = 0;
  for (int i = 0; i < n; ++i) {
    const std::size_t j1 = pick1(rng);
    const std::size_t j2 = pick2(rng);
    const Vec3 t1 = b1.belief.position.mean + root1 * StandardNormal3(rng);
    const Vec3 t2 = b2.belief.position.mean + root2 * StandardNormal3(rng);
    if (Collides(PairDifference(copies1[j1], copies2[j2]), t2 - t1)) ++hits;
  }
  return FinishMonteCarlo(hits, n, PcdMethod::kMcPose, start);
}

}  // namespace sqpcd
