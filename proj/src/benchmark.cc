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

#include "sqpcd/benchmark.h"

#include <algorithm>
#include <atomic>
#include <map>
#include <thread>

namespace sqpcd {
namespace {

BodyBelief MakeBody(Rng& rng, BenchmarkShape shape, double lo, double hi,
                    bool has_error) {
  const Vec3 a(Uniform(rng, 0.2, 1.2), Uniform(rng, 0.2, 1.2),
               Uniform(rng, 0.2, 1.2));
  Vec2 eps(1.0, 1.0);
  if (shape == BenchmarkShape::kSuperquadric) {
    eps = Vec2(Uniform(rng, 0.01, 0.2), Uniform(rng, 0.01, 0.2));
  }
  const Vec3 center(Uniform(rng, lo, hi), Uniform(rng, lo, hi),
                    Uniform(rng, lo, hi));
  const Mat3 r = UniformRotation(rng);
  GaussianPosition pos{center, Mat3::Zero()};
  if (has_error) {
    pos.cov = r * BenchmarkBodyCovariance() * r.transpose();
    pos.cov = 0.5 * (pos.cov + pos.cov.transpose());
  }
  return BodyBelief{Superquadric(a, eps),
                    PoseBelief{pos, RotationBelief::Exact(r)}, 1.0,
                    std::nullopt};
}

}  // namespace

Mat3 BenchmarkBodyCovariance() {
  return Vec3(4.8e-4, 4.8e-4, 6.0e-4).asDiagonal();
}

BenchmarkCase GenerateBenchmarkCase(const BenchmarkConfig& config,
                                    int case_id) {
  Rng rng = MakeRng(config.seed, static_cast<std::uint64_t>(case_id));
  const bool first_error = config.errors == BenchmarkErrors::kDouble;
  BodyBelief first = MakeBody(rng, config.shape, 0.0, 0.1, first_error);
  BodyBelief second = MakeBody(rng, config.shape, 0.3, 1.3, true);
  return BenchmarkCase{case_id, std::move(first), std::move(second)};
}

CaseOutcome RunBenchmarkCase(const BenchmarkConfig& config,
                             const BenchmarkCase& c) {
  CaseOutcome out;
  out.case_id = c.case_id;
  // The Monte-Carlo stream is distinct from the case-generation stream.
  const std::uint64_t mc_seed =
      config.seed * 1000003ULL + static_cast<std::uint64_t>(c.case_id);
  if (config.errors == BenchmarkErrors::kSingle) {
    const int n = config.mc_samples > 0 ? config.mc_samples : kMcSingleSamples;
    const PosedSuperquadric fixed(c.first.shape, c.first.belief.MeanPose());
    out.baseline = McSingle(fixed, c.second, n, mc_seed);
  } else {
    const int n = config.mc_samples > 0 ? config.mc_samples : kMcDoubleSamples;
    out.baseline = McDouble(c.first, c.second, n, mc_seed);
  }
  const BodyBelief first = c.first.WithScreenEllipsoid();
  const BodyBelief second = c.second.WithScreenEllipsoid();
  out.methods.push_back({PcdMethod::kLccCenter, LccCenter(first, second)});
  out.methods.push_back({PcdMethod::kLccTangent, LccTangent(first, second)});
  out.methods.push_back({PcdMethod::kHLcc, HLcc(first, second, config.delta)});
  return out;
}

std::vector<CaseOutcome> RunBenchmark(const BenchmarkConfig& config) {
  if (config.n_cases < 1) {
    throw std::invalid_argument("benchmark needs n_cases >= 1");
  }
  std::vector<CaseOutcome> outcomes(static_cast<std::size_t>(config.n_cases));
  const int hw = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  const int workers = std::min(config.threads > 0 ? config.threads : hw,
                               config.n_cases);
  std::atomic<int> next{0};
  auto work = [&] {
    for (int i = next++; i < config.n_cases; i = next++) {
      outcomes[static_cast<std::size_t>(i)] =
          RunBenchmarkCase(config, GenerateBenchmarkCase(config, i));
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < workers; ++t) pool.emplace_back(work);
  }
  return outcomes;
}

std::vector<MethodSummary> SummarizeBenchmark(
    const std::vector<CaseOutcome>& outcomes) {
  std::vector<MethodSummary> summaries;
  if (outcomes.empty()) return summaries;
  for (std::size_t k = 0; k < outcomes.front().methods.size(); ++k) {
    MethodSummary s;
    s.method = outcomes.front().methods[k].method;
    std::vector<double> diffs;
    for (const CaseOutcome& o : outcomes) {
      diffs.push_back(o.methods[k].result.probability - o.baseline.probability);
      s.mean_time_s += o.methods[k].result.wall_time_s;
    }
    const double n = static_cast<double>(diffs.size());
    for (double d : diffs) s.mean_error += d / n;
    for (double d : diffs) {
      s.variance_error += (d - s.mean_error) * (d - s.mean_error) / n;
    }
    s.mean_time_s /= n;
    summaries.push_back(s);
  }
  return summaries;
}

}  // namespace sqpcd
