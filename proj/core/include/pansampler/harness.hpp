#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pansampler/sampler.hpp"

namespace pansampler {

struct BenchRecord {
  std::string benchmark;
  std::string logic;
  Mode mode = Mode::PanSampler;
  double r = 0;
  bool achieved = false;
  std::size_t num_solutions = 0;
  double time_s = 0;  // sampling wall time, parse excluded
  double parse_time_s = 0;
  double coverage_star = 0;
  StopReason reason = StopReason::Error;
  std::string error;
};

struct RunOptions {
  SamplerConfig sampler;
  /// Directory for `<name>.samples.smt2` and `<name>.report.json`; nothing
  /// is written when unset.
  std::optional<std::filesystem::path> out_dir;
  /// Also write `<name>.cnf` with the CNF of the abstraction.
  bool emit_dimacs = false;
  /// Enumerate small formulas and report exact coverage in the JSON report.
  bool oracle_check = false;
  std::size_t oracle_cap = 20;
};

/// Process exit status for a termination reason: 0 target, 1 error,
/// 2 unsat, 3 timeout, 4 max_solutions, 5 stall.
int exit_code(StopReason reason);

/// Samples one file. Parse, I/O and sampler failures are reported through
/// the record's reason and error fields.
BenchRecord run_file(const std::filesystem::path& path, const RunOptions& opt);

struct SuiteRow {
  double r = 0;
  std::size_t attempted = 0;
  std::size_t suc = 0;
  std::optional<double> mean_solutions;  // over achieved runs
  std::optional<double> mean_time;       // over achieved runs
};

struct SuiteResult {
  std::vector<BenchRecord> records;
  std::vector<SuiteRow> rows;
};

/// Runs every `.smt2` file of `dir` (sorted by name, generated sample files
/// skipped) once per target coverage.
SuiteResult run_suite(const std::filesystem::path& dir, const RunOptions& opt,
                      std::span<const double> targets);

/// Per-target aggregates of a list of records, in order of first appearance.
std::vector<SuiteRow> aggregate(std::span<const BenchRecord> records);

/// CSV: benchmark,logic,mode,r,achieved,num_solutions,time_s,coverage_star,reason
/// With `omit_time` the time column holds "-" so that output is reproducible.
std::string records_csv(std::span<const BenchRecord> records, bool omit_time = false);

/// CSV: r,attempted,suc,mean_sol,mean_time; "-" where no run succeeded.
std::string aggregate_csv(std::span<const SuiteRow> rows, bool omit_time = false);

nlohmann::json record_json(const BenchRecord& rec);
nlohmann::json suite_json(const SuiteResult& suite, bool omit_time = false);

/// Full report of one sampling run.
nlohmann::json sample_report(const Formula& f, const SampleResult& result,
                             const SamplerConfig& cfg);

}  // namespace pansampler
