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

#ifndef SQPCD_BENCHMARK_H_
#define SQPCD_BENCHMARK_H_

#include <cstdint>
#include <string>
#include <vector>

#include "sqpcd/pcd.h"

namespace sqpcd {

enum class BenchmarkShape { kEllipsoid, kSuperquadric };
enum class BenchmarkErrors { kSingle, kDouble };

struct BenchmarkConfig {
  int n_cases = 100;
  BenchmarkShape shape = BenchmarkShape::kSuperquadric;
  BenchmarkErrors errors = BenchmarkErrors::kDouble;
  std::uint64_t seed = 0;
  double delta = 0.05;
  // Monte-Carlo sample count; 0 selects 1e4 (single) or 1e5 (double).
  int mc_samples = 0;
  // Worker threads; 0 uses the hardware concurrency.
  int threads = 0;
};

// One randomized object pair. Body 1 is the fixed body in the single-error
// setting (zero covariance).
struct BenchmarkCase {
  int case_id = 0;
  BodyBelief first;
  BodyBelief second;
};

// Object pair per the single-query protocol: semi-axes from (0.2, 1.2) m,
// exponents from (0.01, 0.2) (or 1 for ellipsoids), centers per axis from
// (0.0, 0.1) m and (0.3, 1.3) m, Haar-random orientations and covariance
// R diag(4.8, 4.8, 6.0)e-4 R^T. Depends only on (seed, case_id).
BenchmarkCase GenerateBenchmarkCase(const BenchmarkConfig& config, int case_id);

// Body-frame covariance used by the benchmarks, m^2.
Mat3 BenchmarkBodyCovariance();

struct MethodOutcome {
  PcdMethod method;
  PcdResult result;
};

struct CaseOutcome {
  int case_id = 0;
  PcdResult baseline;
  std::vector<MethodOutcome> methods;
};

// Runs the baseline and lcc_center, lcc_tangent, h_lcc on one case.
CaseOutcome RunBenchmarkCase(const BenchmarkConfig& config,
                             const BenchmarkCase& c);

// All cases, fanned out over worker threads. Results are ordered by case id
// and independent of the thread count.
std::vector<CaseOutcome> RunBenchmark(const BenchmarkConfig& config);

struct MethodSummary {
  PcdMethod method;
  double mean_error = 0.0;      // mean of (method - baseline)
  double variance_error = 0.0;  // population variance of (method - baseline)
  double mean_time_s = 0.0;
};

std::vector<MethodSummary> SummarizeBenchmark(
    const std::vector<CaseOutcome>& outcomes);

}  // namespace sqpcd

#endif  // SQPCD_BENCHMARK_H_
