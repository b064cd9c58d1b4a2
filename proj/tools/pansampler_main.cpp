#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pansampler/cnf.hpp"
#include "pansampler/diversity_smt.hpp"
#include "pansampler/harness.hpp"
#include "pansampler/parser.hpp"
#include "pansampler/sat_solver.hpp"

namespace fs = std::filesystem;
using namespace pansampler;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_or_print(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path);
}

// Sampler flags shared by `sample` and `suite`; every flag has a
// PANSAMPLER_* environment override.
void add_sampler_flags(CLI::App* cmd, RunOptions& opt, std::string& mode) {
  SamplerConfig& c = opt.sampler;
  cmd->add_option("--target-coverage", c.target_coverage, "Target Coverage* in (0, 1]")
      ->envname("PANSAMPLER_TARGET_COVERAGE")
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--lambda", c.lambda, "Candidates per iteration")
      ->envname("PANSAMPLER_LAMBDA")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--max-solutions", c.max_solutions, "Solution cap")
      ->envname("PANSAMPLER_MAX_SOLUTIONS")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--time-budget", c.time_budget, "Seconds per benchmark")
      ->envname("PANSAMPLER_TIME_BUDGET")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--mode", mode, "pansampler, alt1, alt2 or alt3")
      ->envname("PANSAMPLER_MODE")
      ->check(CLI::IsMember({"pansampler", "alt1", "alt2", "alt3"}));
  cmd->add_option("--seed", c.seed, "Random seed")->envname("PANSAMPLER_SEED");
  cmd->add_option("--bias-p", c.bias_p, "Minority-phase probability in [0.5, 1]")
      ->envname("PANSAMPLER_BIAS_P")
      ->check(CLI::Range(0.5, 1.0));
  cmd->add_flag("--emit-dimacs", opt.emit_dimacs, "Write the abstraction CNF next to the report")
      ->envname("PANSAMPLER_EMIT_DIMACS");
  cmd->add_flag("--oracle-check", opt.oracle_check, "Enumerate small formulas and report exact coverage")
      ->envname("PANSAMPLER_ORACLE_CHECK");
}

int run_sample(const std::string& file, RunOptions opt, const std::string& out_dir) {
  opt.out_dir = out_dir;
  BenchRecord rec = run_file(file, opt);
  std::cout << records_csv({&rec, 1});
  if (!rec.error.empty()) std::cerr << "error: " << rec.error << '\n';
  return exit_code(rec.reason);
}

int run_suite_cmd(const std::string& dir, RunOptions opt, const std::string& out_dir,
                  const std::vector<double>& targets, const std::string& csv_path,
                  const std::string& summary_path, const std::string& json_path,
                  bool omit_time) {
  if (!out_dir.empty()) opt.out_dir = out_dir;
  SuiteResult suite = run_suite(dir, opt, targets);
  write_or_print(csv_path, records_csv(suite.records, omit_time));
  if (!summary_path.empty()) write_or_print(summary_path, aggregate_csv(suite.rows, omit_time));
  if (!json_path.empty()) write_or_print(json_path, suite_json(suite, omit_time).dump(2) + "\n");
  return 0;
}

int run_sat(const std::string& file, std::uint64_t seed) {
  Cnf cnf = parse_dimacs(slurp(file));
  SolverConfig cfg;
  cfg.seed = seed;
  SatResult r = solve(cnf, {}, cfg);
  switch (r.status) {
    case SatStatus::Sat:
      std::cout << "s SATISFIABLE\n" << model_line(r.model) << '\n';
      return 10;
    case SatStatus::Unsat:
      std::cout << "s UNSATISFIABLE\n";
      return 20;
    case SatStatus::Aborted:
      std::cout << "s UNKNOWN\n";
      return 0;
  }
  return 1;
}

int run_blast(const std::string& file, const std::string& out) {
  Formula f = parse_formula(slurp(file));
  DiversitySmt smt(f);
  write_or_print(out, to_dimacs(smt.cnf()));
  return 0;
}

}  // namespace

// CLI11 silently skips environment values that fail an option's check;
// report them as usage errors instead.
int check_env(const CLI::App* cmd) {
  for (const CLI::Option* o : cmd->get_options()) {
    const std::string& name = o->get_envname();
    if (name.empty() || o->count() > 0) continue;
    const char* value = std::getenv(name.c_str());
    if (value != nullptr && *value != '\0') {
      std::cerr << "error: invalid value '" << value << "' in " << name << '\n';
      return 1;
    }
  }
  return 0;
}

int main(int argc, char** argv) {
  CLI::App app{"Coverage-maximizing solution sampler for QF_BV, QF_ABV and QF_AUFBV formulas"};
  app.require_subcommand(1);

  RunOptions opt;
  std::string mode = "pansampler";

  auto* sample_cmd = app.add_subcommand("sample", "Sample one .smt2 file");
  std::string sample_file, sample_out = ".";
  sample_cmd->add_option("file", sample_file, "Input formula")->required()->check(CLI::ExistingFile);
  sample_cmd->add_option("--out-dir", sample_out, "Directory for samples and report")
      ->envname("PANSAMPLER_OUT_DIR");
  add_sampler_flags(sample_cmd, opt, mode);

  auto* suite_cmd = app.add_subcommand("suite", "Sample every .smt2 file of a directory");
  std::string suite_dir, suite_out, csv_path = "-", summary_path, json_path;
  std::vector<double> targets{0.8, 0.9, 0.95, 0.98, 0.99, 0.995};
  bool omit_time = false;
  suite_cmd->add_option("dir", suite_dir, "Benchmark directory")->required()->check(CLI::ExistingDirectory);
  suite_cmd->add_option("--targets", targets, "Target coverages")->delimiter(',');
  suite_cmd->add_option("--out-dir", suite_out, "Directory for per-run artifacts")
      ->envname("PANSAMPLER_OUT_DIR");
  suite_cmd->add_option("--csv", csv_path, "Per-run CSV path ('-' for stdout)");
  suite_cmd->add_option("--summary", summary_path, "Aggregate CSV path");
  suite_cmd->add_option("--json", json_path, "JSON path for records and aggregates");
  suite_cmd->add_flag("--omit-time", omit_time, "Leave wall-clock columns empty for reproducible output")
      ->envname("PANSAMPLER_OMIT_TIME");
  add_sampler_flags(suite_cmd, opt, mode);

  auto* sat_cmd = app.add_subcommand("sat", "Solve a DIMACS CNF file");
  std::string cnf_file;
  std::uint64_t sat_seed = 1;
  sat_cmd->add_option("file", cnf_file, "DIMACS input")->required()->check(CLI::ExistingFile);
  sat_cmd->add_option("--seed", sat_seed, "Random seed");

  auto* blast_cmd = app.add_subcommand("blast", "Print the CNF of a formula's bit-vector abstraction");
  std::string blast_file, blast_out = "-";
  blast_cmd->add_option("file", blast_file, "Input formula")->required()->check(CLI::ExistingFile);
  blast_cmd->add_option("-o,--output", blast_out, "Output path ('-' for stdout)");

  CLI11_PARSE(app, argc, argv);
  for (const CLI::App* cmd : {sample_cmd, suite_cmd})
    if (*cmd)
      if (int rc = check_env(cmd)) return rc;
  opt.sampler.mode = *parse_mode(mode);

  try {
    if (*sample_cmd) return run_sample(sample_file, opt, sample_out);
    if (*suite_cmd)
      return run_suite_cmd(suite_dir, opt, suite_out, targets, csv_path, summary_path,
                           json_path, omit_time);
    if (*sat_cmd) return run_sat(cnf_file, sat_seed);
    if (*blast_cmd) return run_blast(blast_file, blast_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
