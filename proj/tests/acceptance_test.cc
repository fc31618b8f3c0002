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

// Acceptance suite: prints one PASS/FAIL line per criterion and exits with a
// non-zero status if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "sqpcd/benchmark.h"
#include "sqpcd/commands.h"
#include "sqpcd/pcd.h"
#include "sqpcd/planning.h"
#include "sqpcd/random.h"
#include "sqpcd/scene_io.h"
#include "sqpcd/uncertainty.h"
#include "test_util.h"

namespace sqpcd {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string Fmt(const char* format, auto... values) {
  char buffer[512];
  std::snprintf(buffer, sizeof(buffer), format, values...);
  return buffer;
}

struct Verdict {
  bool pass = false;
  std::string detail;
};

double Median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string SceneFile(const std::string& name) {
  return std::string(SQPCD_SCENE_DIR) + "/" + name + ".yaml";
}

// The 100-case superquadric benchmark with two position errors, shared by
// criteria 1-3 and 10.
const std::vector<CaseOutcome>& BenchmarkOutcomes() {
  static const std::vector<CaseOutcome> outcomes = [] {
    BenchmarkConfig config;
    config.n_cases = 100;
    config.shape = BenchmarkShape::kSuperquadric;
    config.errors = BenchmarkErrors::kDouble;
    config.seed = 2026;
    return RunBenchmark(config);
  }();
  return outcomes;
}

const PcdResult& MethodResult(const CaseOutcome& c, PcdMethod m) {
  for (const MethodOutcome& o : c.methods) {
    if (o.method == m) return o.result;
  }
  throw std::logic_error("method missing from benchmark outcome");
}

Verdict BenchmarkTrend() {
  const auto t0 = Clock::now();
  const auto& outcomes = BenchmarkOutcomes();
  double tangent = 0.0, center = 0.0;
  for (const CaseOutcome& c : outcomes) {
    tangent += MethodResult(c, PcdMethod::kLccTangent).probability - c.baseline.probability;
    center += MethodResult(c, PcdMethod::kLccCenter).probability - c.baseline.probability;
  }
  tangent /= outcomes.size();
  center /= outcomes.size();
  return {tangent <= 0.06 && tangent <= 0.5 * center,
          Fmt("mean(lcc_tangent-mc)=%.4f mean(lcc_center-mc)=%.4f over %zu cases, %.0f s",
              tangent, center, outcomes.size(), Seconds(t0))};
}

Verdict UpperBound() {
  int tangent_ok = 0, center_ok = 0;
  const auto& outcomes = BenchmarkOutcomes();
  for (const CaseOutcome& c : outcomes) {
    const double floor = c.baseline.probability - 3.0 * *c.baseline.mc_std_error;
    tangent_ok += MethodResult(c, PcdMethod::kLccTangent).probability >= floor;
    center_ok += MethodResult(c, PcdMethod::kLccCenter).probability >= floor;
  }
  return {tangent_ok >= 99 && center_ok >= 99,
          Fmt("lcc_tangent >= mc-3SE in %d/100, lcc_center in %d/100", tangent_ok, center_ok)};
}

Verdict TangentDominance() {
  int convergent = 0, violations = 0;
  for (const CaseOutcome& c : BenchmarkOutcomes()) {
    const PcdResult& t = MethodResult(c, PcdMethod::kLccTangent);
    if (t.fallback) continue;
    ++convergent;
    violations += t.probability > MethodResult(c, PcdMethod::kLccCenter).probability + 1e-6;
  }
  return {violations == 0,
          Fmt("%d violations over %d convergent cases", violations, convergent)};
}

Verdict SphereOracle() {
  Rng rng = MakeRng(404);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const double r1 = Uniform(rng, 0.1, 1.0), r2 = Uniform(rng, 0.1, 1.0);
    const double s1 = Uniform(rng, 0.01, 0.2), s2 = Uniform(rng, 0.0, 0.2);
    const double gap = Uniform(rng, -0.2, 0.6);
    const Vec3 p = (r1 + r2 + gap) * UniformUnitVector(rng);
    const Vec3 origin(Uniform(rng, -1, 1), Uniform(rng, -1, 1), Uniform(rng, -1, 1));
    auto sphere = [&rng](double r, const Vec3& c, double s) {
      return BodyBelief{Superquadric::Sphere(r),
                        PoseBelief{GaussianPosition{c, s * s * Mat3::Identity()},
                                   RotationBelief::Exact(UniformRotation(rng))},
                        1.0, std::nullopt};
    };
    const BodyBelief b1 = sphere(r1, origin, s1);
    const BodyBelief b2 = sphere(r2, origin + p, s2);
    const double sigma = std::hypot(s1, s2);
    const double expected = p.norm() < r1 + r2 ? 1.0 : testing::Phi((r1 + r2 - p.norm()) / sigma);
    worst = std::max(worst, std::abs(LccTangent(b1, b2).probability - expected));
  }
  return {worst <= 1e-6, Fmt("max |lcc_tangent - closed form| = %.2e over 50 pairs", worst)};
}

std::vector<std::string> CsvCells(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  return cells;
}

// Runs the CLI, returning (exit code, stdout).
std::pair<int, std::string> Cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = RunCli(args, out, err);
  return {code, out.str()};
}

Verdict ShapeFit() {
  struct Anchor {
    const char* spec;
    double expected, tol;
  };
  bool pass = true;
  std::string detail;
  for (const Anchor& a : {Anchor{"cuboid:0.6,0.4,0.25", 0.957, 0.015},
                          Anchor{"cylinder:0.15,0.15,0.5", 0.994, 0.010}}) {
    const auto t0 = Clock::now();
    const auto [code, out] = Cli({"fit-eval", a.spec, "--samples", "1000000", "--seed", "5"});
    const double secs = Seconds(t0);
    std::stringstream ss(out);
    std::string line;
    std::getline(ss, line);
    std::getline(ss, line);
    std::getline(ss, line);
    const double e = code == 0 ? std::stod(CsvCells(line)[2]) : -1.0;
    pass = pass && code == 0 && std::abs(e - a.expected) <= a.tol && secs < 10.0;
    detail += Fmt("%s e=%.4f (%.2f s) ", a.spec, e, secs);
  }
  return {pass, detail};
}

Verdict EnlargedSurface() {
  Rng rng = MakeRng(606);
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const Superquadric sq = testing::RandomSuperquadric(rng, 0.05, 1.9);
    const Mat3 r = UniformRotation(rng);
    const Vec3 n = UniformUnitVector(rng);
    const Vec3 direct = r * sq.SurfacePointFromNormal(r.transpose() * n);
    const Vec3 enlarged = EnlargedSupportPoint(sq, RotationBelief::Exact(r), 1.0, n);
    worst = std::max(worst, (direct - enlarged).norm());
  }
  const testing::SweptCornerCase fixture = testing::MakeSweptCorner(1.0);
  std::vector<double> fractions;
  for (double c : {1.0, 1.1, 1.2, 1.5}) {
    Rng sample_rng = MakeRng(707);
    fractions.push_back(EncapsulationFraction(fixture.box.shape, fixture.box.belief.rotation,
                                              c, 4000, sample_rng));
  }
  const bool monotone = std::is_sorted(fractions.begin(), fractions.end());
  return {worst <= 1e-12 && monotone,
          Fmt("identity error %.1e; encapsulation c=1.0/1.1/1.2/1.5: %.3f %.3f %.3f %.3f",
              worst, fractions[0], fractions[1], fractions[2], fractions[3])};
}

Verdict MeanRotationCriterion() {
  Rng rng = MakeRng(808);
  int recovered = 0, convergent = 0, residual_fail = 0;
  double worst_residual = 0.0;
  for (int rep = 0; rep < 100; ++rep) {
    const Mat3 planted = UniformRotation(rng);
    std::vector<Mat3> samples;
    for (int j = 0; j < 50; ++j) samples.push_back(planted * ExpSO3(0.05 * StandardNormal3(rng)));
    try {
      const Mat3 mean = MeanRotation(samples);
      ++convergent;
      const double residual = KarcherResidual(mean, samples);
      worst_residual = std::max(worst_residual, residual);
      residual_fail += residual > 1e-8;
      recovered += GeodesicDistance(mean, planted) <= 0.03;
    } catch (const NumericalError&) {
    }
  }
  return {residual_fail == 0 && recovered >= 95,
          Fmt("recovered %d/100 within 0.03 rad; max residual %.1e over %d convergent runs",
              recovered, worst_residual, convergent)};
}

Verdict PlannerValidity() {
  const Scene scene = LoadScene(SceneFile("sparse"));
  bool pass = true;
  std::string detail;
  const auto t0 = Clock::now();
  for (Checker checker : kAllCheckers) {
    const StateValidator validator(scene, checker);
    int successes = 0, violations = 0;
    for (int seed = 0; seed < 100; ++seed) {
      const PlanResult r = PlanRrtConnect(scene, checker, TrialSeed(1, seed));
      if (!r.path) continue;
      ++successes;
      const auto& w = r.path->waypoints;
      // Re-validate the path at the interpolation step, including endpoints.
      std::vector<JointVector> states = {w.front()};
      for (std::size_t i = 1; i < w.size(); ++i) {
        for (JointVector& q : InterpolateSegment(w[i - 1], w[i])) states.push_back(q);
      }
      for (const JointVector& q : states) {
        const StateValidity v = validator.Evaluate(q);
        violations += !(v.valid && v.max_prob <= scene.delta);
      }
    }
    pass = pass && successes == 100 && violations == 0;
    detail += Fmt("%s %d%% (%d violations); ", std::string(CheckerName(checker)).c_str(),
                  successes, violations);
  }
  detail += Fmt("%.0f s", Seconds(t0));
  return {pass, detail};
}

Verdict RolloutOrdering() {
  const Scene scene = LoadScene(SceneFile("benchmark"));
  const auto t0 = Clock::now();
  auto risk_of = [&](Checker checker, int& planned) {
    long failures = 0, rollouts = 0;
    planned = 0;
    for (int i = 0; i < 100; ++i) {
      const PlanResult r = PlanRrtConnect(scene, checker, TrialSeed(2, i));
      if (!r.path) continue;
      ++planned;
      const RolloutResult rr = Rollout(scene, *r.path, 500, TrialSeed(3, i));
      failures += static_cast<long>(rr.failures.size());
      rollouts += rr.rollouts;
    }
    return rollouts ? static_cast<double>(failures) / rollouts : 1.0;
  };
  int n_det = 0, n_pos = 0, n_pose = 0;
  const double det = risk_of(Checker::kDeterministic, n_det);
  const double pos = risk_of(Checker::kPositionLcc, n_pos);
  const double pose = risk_of(Checker::kPoseLcc, n_pose);
  const bool all_planned = n_det == 100 && n_pos == 100 && n_pose == 100;
  return {all_planned && pose <= pos && pos <= det && pose < scene.delta + 0.02,
          Fmt("risk pose_lcc=%.4f <= position_lcc=%.4f <= deterministic=%.4f "
              "(paths %d/%d/%d, %.0f s)",
              pose, pos, det, n_pose, n_pos, n_det, Seconds(t0))};
}

Verdict Latency() {
  std::vector<double> tangent_all, tangent_hard, center_all;
  for (const CaseOutcome& c : BenchmarkOutcomes()) {
    const PcdResult& t = MethodResult(c, PcdMethod::kLccTangent);
    tangent_all.push_back(t.wall_time_s);
    if (!t.mean_inside) tangent_hard.push_back(t.wall_time_s);
    center_all.push_back(MethodResult(c, PcdMethod::kLccCenter).wall_time_s);
  }
  const double hard = Median(tangent_hard);
  return {Median(tangent_all) < 0.020 && hard < 0.020,
          Fmt("median lcc_tangent %.3f ms (%.3f ms over %zu separated-mean cases); "
              "median lcc_center %.4f ms",
              1e3 * Median(tangent_all), 1e3 * hard, tangent_hard.size(),
              1e3 * Median(center_all))};
}

std::string ReadAll(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Verdict Determinism() {
  const fs::path dir = fs::temp_directory_path() / "sqpcd_acceptance_determinism";
  fs::create_directories(dir);
  auto file = [&](const std::string& name) { return (dir / name).string(); };
  struct Command {
    std::string name;
    std::vector<std::string> args;
    std::vector<std::string> outputs;
  };
  auto commands = [&](const std::string& run) {
    return std::vector<Command>{
        {"query",
         {"query", SceneFile("two_spheres"), "left", "right", "--method", "mc-pose",
          "--samples", "20000", "--seed", "3", "--out", file("query" + run)},
         {file("query" + run)}},
        {"benchmark",
         {"benchmark", "--cases", "12", "--seed", "4", "--samples", "5000", "--out",
          file("bench" + run)},
         {file("bench" + run)}},
        {"plan",
         {"plan", SceneFile("benchmark"), "--method", "position-lcc", "--trials", "5",
          "--seed", "5", "--out", file("plan" + run), "--paths-out", file("paths" + run)},
         {file("plan" + run), file("paths" + run)}},
        {"rollout",
         {"rollout", SceneFile("benchmark"), file("paths" + run), "--rollouts", "200",
          "--seed", "6", "--out", file("roll" + run), "--failures-out", file("fail" + run)},
         {file("roll" + run), file("fail" + run)}},
        {"fit-eval",
         {"fit-eval", "cylinder:0.2,0.3,0.4", "--samples", "100000", "--seed", "7", "--out",
          file("fit" + run)},
         {file("fit" + run)}},
    };
  };
  const auto first = commands("_a.csv");
  const auto second = commands("_b.csv");
  bool pass = true;
  std::string detail;
  for (std::size_t i = 0; i < first.size(); ++i) {
    const int c1 = Cli(first[i].args).first;
    const int c2 = Cli(second[i].args).first;
    bool same = c1 == 0 && c2 == 0;
    for (std::size_t k = 0; k < first[i].outputs.size(); ++k) {
      const std::string a = ReadAll(first[i].outputs[k]);
      same = same && !a.empty() && a == ReadAll(second[i].outputs[k]);
    }
    pass = pass && same;
    detail += first[i].name + (same ? " identical; " : " DIFFERS; ");
  }
  fs::remove_all(dir);
  return {pass, detail};
}

}  // namespace
}  // namespace sqpcd

int main() {
  using sqpcd::Verdict;
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"benchmark trend", sqpcd::BenchmarkTrend},
      {"upper-bound soundness", sqpcd::UpperBound},
      {"tangent dominance", sqpcd::TangentDominance},
      {"analytic sphere oracle", sqpcd::SphereOracle},
      {"shape-fit anchors", sqpcd::ShapeFit},
      {"enlarged-surface identity and monotonicity", sqpcd::EnlargedSurface},
      {"mean rotation", sqpcd::MeanRotationCriterion},
      {"planner validity", sqpcd::PlannerValidity},
      {"rollout risk ordering", sqpcd::RolloutOrdering},
      {"single-query latency", sqpcd::Latency},
      {"determinism", sqpcd::Determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failed += !v.pass;
    std::printf("criterion %zu (%s): %s - %s\n", i + 1, criteria[i].first.c_str(),
                v.pass ? "PASS" : "FAIL", v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
