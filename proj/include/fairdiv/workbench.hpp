#pragma once

// Instance generation, benchmark harness and valuation scaling behind the CLI.

#include <cstdint>
#include <string>
#include <vector>

#include "fairdiv/io.hpp"
#include "fairdiv/model.hpp"
#include "fairdiv/solvers.hpp"

namespace fairdiv::workbench {

enum class Distribution { Uniform, Bivalued, Identical };

struct GenSpec {
  int n = 3;
  int m = 8;
  Distribution distribution = Distribution::Uniform;
  Value lo = 1;  // uniform / identical
  Value hi = 50;
  Value a = 1;  // bivalued: a with probability p, b otherwise
  Value b = 2;
  Ratio p{1, 2};
  std::uint64_t seed = 0;

  /// Throws ValidationError on bad fields.
  void validate() const;
};

/// "uniform", "bivalued", "identical"
Distribution parse_distribution(const std::string& name);
std::string to_string(Distribution d);

Instance generate(const GenSpec& spec);

/// Instance JSON with a metadata block with the generator settings.
std::string cmd_gen(const GenSpec& spec);

enum class Goal { Mms, EfxMms, Ef1Mms };

/// "mms", "efx-mms", "ef1-mms"
Goal parse_goal(const std::string& name);
std::string to_string(Goal g);

SolveReport run_goal(Goal goal, const Instance& inst, const SolverConfig& cfg);

struct BenchRow {
  std::string instance_id;
  Goal goal = Goal::Mms;
  Ratio epsilon;
  Ratio delta;
  std::string mms_ratio;  // reduced fraction, "inf", or "n/a"
  bool efx_pass = false;
  bool ef1_pass = false;
  std::size_t pool_size = 0;
  int iterations = 0;
  long long wall_millis = 0;
  std::string status;  // "ok" or "failed: <reason>"
};

inline constexpr const char* kBenchHeader =
    "instance_id,goal,epsilon,delta,mms_ratio,efx_pass,ef1_pass,pool_size,iterations,wall_millis,status";

struct BenchOptions {
  std::vector<Goal> goals{Goal::Mms, Goal::EfxMms, Goal::Ef1Mms};
  Ratio epsilon;
  Ratio delta;
  int jobs = 1;
  int exact_cap = kDefaultExactCap;
};

/// Sorted *.json files directly inside dir.
std::vector<std::string> corpus_files(const std::string& dir);

/// One row per (file, goal) in input order.
std::vector<BenchRow> bench(const std::vector<std::string>& files, const BenchOptions& opts);

/// CSV text with header; wall_millis written as 0 when zero_wall is set.
std::string bench_csv(const std::vector<BenchRow>& rows, bool zero_wall = false);

std::string cmd_bench(const std::string& corpus_dir, const BenchOptions& opts, bool zero_wall = false);

struct Scaled {
  Instance instance;
  Value factor = 1;
};

/// Valuations given as integers or strings ("0.25", "1/3", "7"); every
/// value's reduced denominator must be at most denominator_bound.
Scaled scale_valuations(const io::Json& input, std::int64_t denominator_bound);

/// Scaled instance JSON with metadata.scale_factor.
std::string cmd_scale(const io::Json& input, std::int64_t denominator_bound);

}  // namespace fairdiv::workbench
