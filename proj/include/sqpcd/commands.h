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

#ifndef SQPCD_COMMANDS_H_
#define SQPCD_COMMANDS_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace sqpcd {

// Process exit codes of the command-line harness.
enum ExitCode : int {
  kExitOk = 0,
  kExitInputError = 2,
  kExitNumericalFailure = 3,
  kExitTimeout = 4,
};

// One CSV record of a probability query or benchmark case.
struct ResultRow {
  std::string case_id;
  std::string method;
  double probability = 0.0;
  std::optional<double> mc_baseline;
  std::optional<double> mc_se;
  std::optional<double> abs_error;
  std::optional<double> wall_time_s;
  std::uint64_t seed = 0;
};

inline constexpr char kResultSchemaLine[] = "# sqpcd-results v1";
inline constexpr char kResultHeader[] =
    "case_id,method,probability,mc_baseline,mc_se,abs_error,wall_time_s,seed";
inline constexpr char kPlanSchemaLine[] = "# sqpcd-plan v1";
inline constexpr char kPlanHeader[] =
    "trial,method,seed,success,path_length_rad,plan_time_s,iterations";
inline constexpr char kRolloutSchemaLine[] = "# sqpcd-rollout v1";
inline constexpr char kRolloutHeader[] = "path_id,rollouts,failures,risk,seed";
inline constexpr char kFailureSchemaLine[] = "# sqpcd-rollout-failures v1";
inline constexpr char kFailureHeader[] = "path_id,rollout,waypoint,link,obstacle";

// Shortest decimal text that reads back to the same double.
std::string FormatNumber(double value);
std::string FormatResultRow(const ResultRow& row);
// Schema line, header, then one line per row.
void WriteResults(std::ostream& out, const std::vector<ResultRow>& rows);

// Planner seed of trial `trial` in a campaign seeded with `seed`.
std::uint64_t TrialSeed(std::uint64_t seed, int trial);

// Entry point of the `sqpcd` executable. CSV goes to --out or `out`;
// summaries and diagnostics go to `err`.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

}  // namespace sqpcd

#endif  // SQPCD_COMMANDS_H_
