#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "corrsim/marginals.hpp"
#include "corrsim/sampler.hpp"

namespace corrsim::cli {

enum ExitCode : int { exit_ok = 0, exit_fail = 1, exit_usage = 2 };

/// A sampling job as read from a JSON file:
///
///   {"marginals": [{"family": "uniform", "a": 0, "b": 1}, ...],
///    "correlation": [r21, r31, r32, ...],      (or "concurrence")
///    "count": 1000, "seed": 42, "streams": 1,
///    "alpha_policy": "midpoint" | {"explicit": 0.1}}
///
/// Matrices are the strictly lower triangle, row-major.
struct JobConfig {
  std::vector<MarginalSpec> marginals;
  std::optional<std::vector<double>> correlation;
  std::optional<std::vector<double>> concurrence;
  std::uint64_t count = 1000;
  std::uint64_t seed = 0;
  std::uint64_t streams = 1;
  AlphaPolicy alpha_policy;

  bool operator==(const JobConfig&) const = default;
};

/// Throws ParseError on malformed JSON or schema violations, DomainError on
/// out-of-range family parameters.
JobConfig parse_config(const std::string& text);
JobConfig load_config(const std::string& path);
std::string serialize_config(const JobConfig& cfg);

SamplingPlan plan_for(const JobConfig& cfg, const PlanOptions& opts = {});

/// Commands write results to `out`, messages to `err`, and return the exit code.
int cmd_bounds(const JobConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_plan(const JobConfig& cfg, std::ostream& out, std::ostream& err);
/// CSV with header x1,...,xn. Rows are produced in full before the first
/// byte is written, so a failing job leaves `out` untouched.
int cmd_sample(const JobConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_verify(const JobConfig& cfg, std::istream& csv, std::ostream& out, std::ostream& err);

/// Shortest decimal that reads back to the same double.
std::string format_double(double x);

/// Full CSV text for a set of batches in stream order.
std::string to_csv(const std::vector<SampleBatch>& batches, std::size_t n);

/// Parses x1..xn CSV into column-major values; throws ParseError.
std::vector<std::vector<double>> read_csv(std::istream& in, std::size_t n);

}  // namespace corrsim::cli
