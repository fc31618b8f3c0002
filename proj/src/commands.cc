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

#include "sqpcd/commands.h"

#include <charconv>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "sqpcd/benchmark.h"
#include "sqpcd/pcd.h"
#include "sqpcd/planning.h"
#include "sqpcd/random.h"
#include "sqpcd/scene_io.h"
#include "sqpcd/shape_metrics.h"

namespace sqpcd {
namespace {

// Quotes a text cell when it contains a delimiter, quote or line break.
std::string CsvText(const std::string& text) {
  if (text.find_first_of(",\"\n\r") == std::string::npos) return text;
  std::string quoted = "\"";
  for (char ch : text) {
    if (ch == '"') quoted += '"';
    quoted += ch;
  }
  return quoted + "\"";
}

std::string Optional(const std::optional<double>& v) {
  return v ? FormatNumber(*v) : std::string();
}

// CSV sink: the --out file when given, otherwise the command's stdout.
class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw InputError(path + ": cannot open output file");
      stream_ = file_.get();
    }
  }
  std::ostream& stream() { return *stream_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

void ApplyOverrides(Scene& scene, const std::optional<double>& delta,
                    const std::optional<double>& c_scale) {
  if (delta) {
    if (!(*delta > 0.0 && *delta < 1.0)) throw InputError("--delta must lie in (0, 1)");
    scene.delta = *delta;
  }
  if (c_scale) {
    if (!(*c_scale > 0.0)) throw InputError("--c-scale must be positive");
    for (Obstacle& o : scene.obstacles) o.body.enlargement_c = *c_scale;
  }
}

// Parses "cuboid:l,w,h", "cylinder:rx,ry,h" or "superquadric:a1,a2,a3,e1,e2".
PrimitiveShape ParseShapeSpec(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) {
    throw InputError("shape '" + spec + "': expected kind:v1,v2,...");
  }
  const std::string kind = spec.substr(0, colon);
  std::vector<double> v;
  std::stringstream ss(spec.substr(colon + 1));
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    double x = 0.0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), x);
    if (ec != std::errc() || ptr != cell.data() + cell.size()) {
      throw InputError("shape '" + spec + "': malformed number '" + cell + "'");
    }
    v.push_back(x);
  }
  auto need = [&](std::size_t n) {
    if (v.size() != n) {
      throw InputError("shape '" + spec + "': " + kind + " takes " +
                       std::to_string(n) + " values");
    }
  };
  try {
    if (kind == "cuboid") {
      need(3);
      return PrimitiveShape(Cuboid{v[0], v[1], v[2]});
    }
    if (kind == "cylinder") {
      need(3);
      return PrimitiveShape(Cylinder{v[0], v[1], v[2]});
    }
    if (kind == "superquadric") {
      need(5);
      return PrimitiveShape(Superquadric(Vec3(v[0], v[1], v[2]), Vec2(v[3], v[4])));
    }
  } catch (const std::invalid_argument& e) {
    throw InputError("shape '" + spec + "': " + e.what());
  }
  throw InputError("shape '" + spec + "': unknown kind '" + kind + "'");
}

struct CommonFlags {
  std::string out;
  std::uint64_t seed = 0;
  bool timing = false;
};

void AddCommon(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--seed", f.seed, "Random seed");
  cmd->add_option("--out", f.out, "CSV output file (default: stdout)");
  cmd->add_flag("--timing", f.timing,
                "Record wall-clock times in the CSV (makes output run-dependent)");
}

// ---------------------------------------------------------------- query

struct QueryFlags {
  CommonFlags common;
  std::string scene, a, b;
  std::string method = "lcc-tangent";
  int samples = 0;
  std::optional<double> delta, c_scale;
};

int RunQuery(const QueryFlags& f, std::ostream& out, std::ostream& err) {
  Scene scene = LoadScene(f.scene);
  ApplyOverrides(scene, f.delta, f.c_scale);
  const Obstacle* a = scene.FindObstacle(f.a);
  const Obstacle* b = scene.FindObstacle(f.b);
  if (!a) throw InputError(f.scene + ": field 'objects': no object named '" + f.a + "'");
  if (!b) throw InputError(f.scene + ": field 'objects': no object named '" + f.b + "'");
  const std::optional<PcdMethod> method = ParseMethod(f.method);
  if (!method) throw InputError("--method: unknown method '" + f.method + "'");
  if (f.samples < 0) throw InputError("--samples must be >= 0");

  const BodyBelief& b1 = a->body;
  const BodyBelief& b2 = b->body;
  PcdResult r;
  switch (*method) {
    case PcdMethod::kMcSingle:
      r = McSingle(PosedSuperquadric(b1.shape, Pose{b1.belief.rotation.mean,
                                                    b1.belief.position.mean}),
                   b2, f.samples > 0 ? f.samples : kMcSingleSamples, f.common.seed);
      break;
    case PcdMethod::kMcDouble:
      r = McDouble(b1, b2, f.samples > 0 ? f.samples : kMcDoubleSamples, f.common.seed);
      break;
    case PcdMethod::kMcPose:
      r = McPose(b1, b2, f.samples > 0 ? f.samples : kMcDoubleSamples, f.common.seed);
      break;
    case PcdMethod::kLccCenter: r = LccCenter(b1, b2); break;
    case PcdMethod::kLccTangent: r = LccTangent(b1, b2); break;
    case PcdMethod::kHLcc:
      r = HLcc(b1.WithScreenEllipsoid(), b2.WithScreenEllipsoid(), scene.delta);
      break;
    case PcdMethod::kDeterministic: r = DeterministicCheck(b1, b2); break;
  }
  ResultRow row;
  row.case_id = f.a + "|" + f.b;
  row.method = std::string(MethodName(*method));
  row.probability = r.probability;
  row.seed = f.common.seed;
  row.mc_se = r.mc_std_error;
  if (!r.mc_std_error && f.samples > 0) {
    // Pose-aware Monte-Carlo reference for the analytic methods.
    const PcdResult mc = McPose(b1, b2, f.samples, f.common.seed);
    row.mc_baseline = mc.probability;
    row.mc_se = mc.mc_std_error;
    row.abs_error = std::abs(r.probability - mc.probability);
  }
  if (f.common.timing) row.wall_time_s = r.wall_time_s;
  Output o(f.common.out, out);
  WriteResults(o.stream(), {row});
  if (r.fallback) err << "warning: tangent search did not converge; center plane used\n";
  return kExitOk;
}

// ------------------------------------------------------------ benchmark

struct BenchmarkFlags {
  CommonFlags common;
  int cases = 100;
  std::string shape = "superquadric";
  std::string errors = "double";
  int samples = 0;
  double delta = 0.05;
  int threads = 0;
};

int RunBenchmarkCommand(const BenchmarkFlags& f, std::ostream& out,
                        std::ostream& err) {
  BenchmarkConfig config;
  if (f.cases < 1) throw InputError("--cases must be >= 1");
  if (f.samples < 0) throw InputError("--samples must be >= 0");
  if (!(f.delta > 0.0 && f.delta < 1.0)) throw InputError("--delta must lie in (0, 1)");
  config.n_cases = f.cases;
  config.seed = f.common.seed;
  config.mc_samples = f.samples;
  config.delta = f.delta;
  config.threads = f.threads;
  if (f.shape == "superquadric") {
    config.shape = BenchmarkShape::kSuperquadric;
  } else if (f.shape == "ellipsoid") {
    config.shape = BenchmarkShape::kEllipsoid;
  } else {
    throw InputError("--shape: expected superquadric or ellipsoid");
  }
  if (f.errors == "double") {
    config.errors = BenchmarkErrors::kDouble;
  } else if (f.errors == "single") {
    config.errors = BenchmarkErrors::kSingle;
  } else {
    throw InputError("--errors: expected single or double");
  }

  const std::vector<CaseOutcome> outcomes = RunBenchmark(config);
  std::vector<ResultRow> rows;
  for (const CaseOutcome& c : outcomes) {
    ResultRow base;
    base.case_id = std::to_string(c.case_id);
    base.method = std::string(MethodName(c.baseline.method));
    base.probability = c.baseline.probability;
    base.mc_baseline = c.baseline.probability;
    base.mc_se = c.baseline.mc_std_error;
    base.abs_error = 0.0;
    base.seed = config.seed;
    if (f.common.timing) base.wall_time_s = c.baseline.wall_time_s;
    rows.push_back(base);
    for (const MethodOutcome& m : c.methods) {
      ResultRow row = base;
      row.method = std::string(MethodName(m.method));
      row.probability = m.result.probability;
      row.abs_error = std::abs(m.result.probability - c.baseline.probability);
      row.wall_time_s = f.common.timing ? std::optional(m.result.wall_time_s)
                                        : std::nullopt;
      rows.push_back(row);
    }
  }
  Output o(f.common.out, out);
  WriteResults(o.stream(), rows);

  err << "# summary: " << f.cases << " cases, shape=" << f.shape
      << ", errors=" << f.errors << ", seed=" << f.common.seed << "\n"
      << "method,mean_error,variance_error,mean_time_s\n";
  for (const MethodSummary& s : SummarizeBenchmark(outcomes)) {
    err << MethodName(s.method) << "," << FormatNumber(s.mean_error) << ","
        << FormatNumber(s.variance_error) << "," << FormatNumber(s.mean_time_s)
        << "\n";
  }
  return kExitOk;
}

// ----------------------------------------------------------------- plan

struct PlanFlags {
  CommonFlags common;
  std::string scene;
  std::string method = "pose-lcc";
  int trials = 100;
  double timeout_s = 10.0;
  std::optional<double> delta, c_scale;
  std::string paths_out;
};

int RunPlanCommand(const PlanFlags& f, std::ostream& out, std::ostream& err) {
  Scene scene = LoadScene(f.scene);
  ApplyOverrides(scene, f.delta, f.c_scale);
  const std::optional<Checker> checker = ParseChecker(f.method);
  if (!checker) throw InputError("--method: unknown checker '" + f.method + "'");
  if (f.trials < 1) throw InputError("--trials must be >= 1");
  if (!(f.timeout_s > 0.0)) throw InputError("--timeout-s must be positive");
  PlannerOptions options;
  options.max_time_s = f.timeout_s;

  Output o(f.common.out, out);
  std::ostream& csv = o.stream();
  csv << kPlanSchemaLine << "\n" << kPlanHeader << "\n";
  std::map<int, Path> paths;
  int successes = 0, timeouts = 0;
  double length_sum = 0.0, time_sum = 0.0;
  for (int t = 0; t < f.trials; ++t) {
    const std::uint64_t seed = TrialSeed(f.common.seed, t);
    const PlanResult r = PlanRrtConnect(scene, *checker, seed, options);
    const bool ok = r.path.has_value();
    successes += ok;
    timeouts += r.timed_out;
    time_sum += r.plan_time_s;
    if (ok) {
      length_sum += r.path->length;
      paths[t] = *r.path;
    }
    csv << t << "," << CheckerName(*checker) << "," << seed << "," << (ok ? 1 : 0)
        << "," << (ok ? FormatNumber(r.path->length) : std::string()) << ","
        << (f.common.timing ? FormatNumber(r.plan_time_s) : std::string()) << ","
        << r.iterations << "\n";
  }
  if (!f.paths_out.empty()) {
    std::ofstream p(f.paths_out);
    if (!p) throw InputError(f.paths_out + ": cannot open output file");
    WritePaths(p, paths);
  }
  err << "# summary: scene=" << f.scene << " method=" << CheckerName(*checker)
      << " trials=" << f.trials << "\n"
      << "success_rate," << FormatNumber(static_cast<double>(successes) / f.trials)
      << "\nmean_path_length_rad,"
      << (successes ? FormatNumber(length_sum / successes) : std::string("nan"))
      << "\nmean_plan_time_s," << FormatNumber(time_sum / f.trials)
      << "\ntimeouts," << timeouts << "\n";
  if (successes == 0 && timeouts > 0) return kExitTimeout;
  return kExitOk;
}

// -------------------------------------------------------------- rollout

struct RolloutFlags {
  CommonFlags common;
  std::string scene, paths;
  int rollouts = 500;
  std::optional<double> c_scale;
  std::string failures_out;
};

int RunRolloutCommand(const RolloutFlags& f, std::ostream& out,
                      std::ostream& err) {
  Scene scene = LoadScene(f.scene);
  ApplyOverrides(scene, std::nullopt, f.c_scale);
  if (f.rollouts < 1) throw InputError("--rollouts must be >= 1");
  std::ifstream in(f.paths);
  if (!in) throw InputError(f.paths + ": cannot open path file");
  const std::map<int, Path> paths = ReadPaths(in, f.paths);
  if (paths.empty()) throw InputError(f.paths + ": no paths");
  for (const auto& [id, path] : paths) {
    for (const JointVector& q : path.waypoints) {
      if (!scene.chain.WithinLimits(q)) {
        throw InputError(f.paths + ": path " + std::to_string(id) +
                         " leaves the joint limits of the scene's chain");
      }
    }
  }

  Output o(f.common.out, out);
  std::ostream& csv = o.stream();
  csv << kRolloutSchemaLine << "\n" << kRolloutHeader << "\n";
  std::unique_ptr<std::ofstream> failures;
  if (!f.failures_out.empty()) {
    failures = std::make_unique<std::ofstream>(f.failures_out);
    if (!*failures) throw InputError(f.failures_out + ": cannot open output file");
    *failures << kFailureSchemaLine << "\n" << kFailureHeader << "\n";
  }
  long total_failures = 0;
  for (const auto& [id, path] : paths) {
    const std::uint64_t seed = TrialSeed(f.common.seed, id);
    const RolloutResult r = Rollout(scene, path, f.rollouts, seed);
    total_failures += static_cast<long>(r.failures.size());
    csv << id << "," << r.rollouts << "," << r.failures.size() << ","
        << FormatNumber(r.risk) << "," << seed << "\n";
    if (failures) {
      for (const RolloutFailure& x : r.failures) {
        *failures << id << "," << x.rollout << "," << x.waypoint << "," << x.link
                  << "," << CsvText(x.obstacle) << "\n";
      }
    }
  }
  err << "# summary: paths=" << paths.size() << " rollouts_per_path=" << f.rollouts
      << "\nrisk,"
      << FormatNumber(static_cast<double>(total_failures) /
                      (static_cast<double>(paths.size()) * f.rollouts))
      << "\n";
  return kExitOk;
}

// ------------------------------------------------------------- fit-eval

struct FitEvalFlags {
  CommonFlags common;
  std::string shape, truth;
  int samples = kDefaultOverlapSamples;
};

int RunFitEval(const FitEvalFlags& f, std::ostream& out, std::ostream&) {
  const PrimitiveShape shape = ParseShapeSpec(f.shape);
  if (f.samples < 1000) throw InputError("--samples must be >= 1000");
  // One shape: score its superquadric approximation against it. Two shapes:
  // score the first against the second.
  const bool pair = !f.truth.empty();
  const PrimitiveShape truth = pair ? ParseShapeSpec(f.truth) : shape;
  const PrimitiveShape query = pair ? shape : PrimitiveShape(SqApproximation(shape));
  const OverlapResult r = OverlapMetric(query, truth, f.samples, f.common.seed);
  ResultRow row;
  row.case_id = pair ? shape.Describe() + "|" + truth.Describe() : shape.Describe();
  row.method = pair ? "overlap" : "sq_approximation_overlap";
  row.probability = r.value;
  row.mc_se = r.std_error;
  row.seed = f.common.seed;
  Output o(f.common.out, out);
  WriteResults(o.stream(), {row});
  return kExitOk;
}

}  // namespace

std::string FormatNumber(double value) {
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc()) return "nan";
  return std::string(buffer, ptr);
}

std::string FormatResultRow(const ResultRow& row) {
  std::ostringstream s;
  s << CsvText(row.case_id) << "," << CsvText(row.method) << ","
    << FormatNumber(row.probability)
    << "," << Optional(row.mc_baseline) << "," << Optional(row.mc_se) << ","
    << Optional(row.abs_error) << "," << Optional(row.wall_time_s) << ","
    << row.seed;
  return s.str();
}

void WriteResults(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << kResultSchemaLine << "\n" << kResultHeader << "\n";
  for (const ResultRow& r : rows) out << FormatResultRow(r) << "\n";
}

std::uint64_t TrialSeed(std::uint64_t seed, int trial) {
  Rng rng = MakeRng(seed, static_cast<std::uint64_t>(trial));
  return rng();
}

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Probabilistic collision detection for superquadrics"};
  app.name("sqpcd");
  app.require_subcommand(1);

  QueryFlags query;
  CLI::App* q = app.add_subcommand("query", "Collision probability of two scene objects");
  q->add_option("scene", query.scene, "Scene file")->required();
  q->add_option("object_a", query.a, "First object name")->required();
  q->add_option("object_b", query.b, "Second object name")->required();
  q->add_option("--method", query.method,
                "mc-single | mc-double | mc-pose | lcc-center | lcc-tangent | "
                "h-lcc | deterministic")
      ->capture_default_str();
  q->add_option("--samples", query.samples,
                "Monte-Carlo samples (reference estimate for analytic methods when > 0)");
  q->add_option("--delta", query.delta, "Collision threshold (overrides the scene)");
  q->add_option("--c-scale", query.c_scale, "Enlargement constant for every object");
  AddCommon(q, query.common);

  BenchmarkFlags bench;
  CLI::App* b = app.add_subcommand("benchmark", "Randomized single-query benchmark");
  b->add_option("--cases", bench.cases, "Number of random cases")->capture_default_str();
  b->add_option("--shape", bench.shape, "superquadric | ellipsoid")->capture_default_str();
  b->add_option("--errors", bench.errors, "single | double")->capture_default_str();
  b->add_option("--samples", bench.samples, "Monte-Carlo baseline samples (0: auto)");
  b->add_option("--delta", bench.delta, "h_lcc threshold")->capture_default_str();
  b->add_option("--threads", bench.threads, "Worker threads (0: all cores)");
  AddCommon(b, bench.common);

  PlanFlags plan;
  CLI::App* p = app.add_subcommand("plan", "RRT-connect planning trials");
  p->add_option("scene", plan.scene, "Scene file")->required();
  p->add_option("--method", plan.method,
                "deterministic | position-lcc | pose-lcc | h-lcc")
      ->capture_default_str();
  p->add_option("--trials", plan.trials, "Planning queries")->capture_default_str();
  p->add_option("--timeout-s", plan.timeout_s, "Per-query time budget")
      ->capture_default_str();
  p->add_option("--delta", plan.delta, "Collision threshold (overrides the scene)");
  p->add_option("--c-scale", plan.c_scale, "Enlargement constant for every object");
  p->add_option("--paths-out", plan.paths_out, "Write found paths to this CSV file");
  AddCommon(p, plan.common);

  RolloutFlags roll;
  CLI::App* r = app.add_subcommand("rollout", "Simulated execution of planned paths");
  r->add_option("scene", roll.scene, "Scene file")->required();
  r->add_option("paths", roll.paths, "Path CSV from `plan --paths-out`")->required();
  r->add_option("--rollouts", roll.rollouts, "Rollouts per path")->capture_default_str();
  r->add_option("--c-scale", roll.c_scale, "Enlargement constant for every object");
  r->add_option("--failures-out", roll.failures_out, "Write failure details here");
  AddCommon(r, roll.common);

  FitEvalFlags fit;
  CLI::App* fe = app.add_subcommand("fit-eval", "Volume-overlap score of shape approximations");
  fe->add_option("shape", fit.shape,
                 "cuboid:l,w,h | cylinder:rx,ry,h | superquadric:a1,a2,a3,e1,e2")
      ->required();
  fe->add_option("truth", fit.truth, "Optional second shape to compare against");
  fe->add_option("--samples", fit.samples, "Monte-Carlo samples")->capture_default_str();
  AddCommon(fe, fit.common);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }

  try {
    if (q->parsed()) return RunQuery(query, out, err);
    if (b->parsed()) return RunBenchmarkCommand(bench, out, err);
    if (p->parsed()) return RunPlanCommand(plan, out, err);
    if (r->parsed()) return RunRolloutCommand(roll, out, err);
    if (fe->parsed()) return RunFitEval(fit, out, err);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumericalFailure;
  } catch (const std::exception& e) {
    err << "failure: " << e.what() << "\n";
    return kExitNumericalFailure;
  }
  return kExitInputError;
}

}  // namespace sqpcd
