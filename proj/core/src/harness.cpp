#include "pansampler/harness.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "pansampler/cnf.hpp"
#include "pansampler/coverage.hpp"
#include "pansampler/model_io.hpp"
#include "pansampler/oracle.hpp"
#include "pansampler/parser.hpp"

namespace pansampler {

namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

std::string stem_of(const fs::path& p) {
  std::string name = p.filename().string();
  const std::string ext = ".smt2";
  if (name.size() > ext.size() && name.ends_with(ext))
    name.resize(name.size() - ext.size());
  return name;
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + p.string());
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

nlohmann::json oracle_section(const Formula& f, const SampleResult& result, double r,
                              std::size_t cap) {
  nlohmann::json out;
  try {
    oracle::EnumerationReport report = oracle::enumerate_solutions(f, cap);
    bool all_valid = true;
    for (const Assignment& a : result.solutions) all_valid &= oracle::satisfies(f, a);
    oracle::MinCoverResult mc = oracle::min_cover(report, r);
    out = {{"status", "checked"},
           {"solution_count", report.solutions.size()},
           {"valid_bits", report.valid_bits},
           {"total_bits", report.universe.slot_count()},
           {"exact_coverage", oracle::exact_coverage(f, report, result.solutions)},
           {"min_cover", mc.cardinality},
           {"min_cover_exact", mc.exact},
           {"samples_valid", all_valid}};
  } catch (const oracle::CapExceeded& e) {
    out = {{"status", "skipped"}, {"reason", e.what()}};
  }
  return out;
}

}  // namespace

int exit_code(StopReason reason) {
  switch (reason) {
    case StopReason::Target: return 0;
    case StopReason::Error: return 1;
    case StopReason::Unsat: return 2;
    case StopReason::Timeout: return 3;
    case StopReason::MaxSolutions: return 4;
    case StopReason::Stall: return 5;
  }
  return 1;
}

nlohmann::json sample_report(const Formula& f, const SampleResult& result,
                             const SamplerConfig& cfg) {
  nlohmann::json solutions = nlohmann::json::array();
  for (const Assignment& a : result.solutions) solutions.push_back(assignment_to_json(f, a));
  return {
      {"config",
       {{"lambda", cfg.lambda},
        {"target_coverage", cfg.target_coverage},
        {"max_solutions", cfg.max_solutions},
        {"time_budget", cfg.time_budget},
        {"mode", mode_name(cfg.mode)},
        {"seed", cfg.seed},
        {"bias_p", cfg.bias_p}}},
      {"achieved", result.achieved},
      {"reason", reason_name(result.reason)},
      {"error", result.error},
      {"iterations", result.iterations},
      {"num_solutions", result.solutions.size()},
      {"wall_time_s", result.wall_time},
      {"timing",
       {{"sampling_s", result.times.sampling},
        {"evaluation_s", result.times.evaluation},
        {"optimization_s", result.times.optimization}}},
      {"coverage",
       {{"covered_slots", result.covered_slots},
        {"total_slots", result.total_slots},
        {"coverage_star", result.final_coverage()},
        {"num_solutions", result.solutions.size()}}},
      {"coverage_star_trace", result.coverage_star_trace},
      {"lemmas", {{"count", result.lemmas}, {"bound", result.lemma_bound},
                  {"max_rounds_per_call", result.max_lemma_rounds}}},
      {"solutions", solutions},
  };
}

BenchRecord run_file(const fs::path& path, const RunOptions& opt) {
  BenchRecord rec;
  rec.benchmark = path.filename().string();
  rec.mode = opt.sampler.mode;
  rec.r = opt.sampler.target_coverage;

  const auto t0 = Clock::now();
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    rec.error = "cannot read " + path.string();
    return rec;
  }
  std::stringstream buf;
  buf << in.rdbuf();
  Formula f;
  try {
    f = parse_formula(buf.str());
  } catch (const std::exception& e) {
    rec.error = e.what();
    return rec;
  }
  rec.logic = f.logic();
  rec.parse_time_s = std::chrono::duration<double>(Clock::now() - t0).count();

  SampleResult result;
  std::optional<Cnf> cnf;
  try {
    Sampler sampler(f, opt.sampler);
    result = sampler.run();
    if (opt.emit_dimacs) cnf = sampler.smt().cnf();
  } catch (const std::exception& e) {
    rec.error = e.what();
    return rec;
  }
  rec.achieved = result.achieved;
  rec.num_solutions = result.solutions.size();
  rec.time_s = result.wall_time;
  rec.coverage_star = result.final_coverage();
  rec.reason = result.reason;
  rec.error = result.error;

  if (!opt.out_dir) return rec;
  try {
    fs::create_directories(*opt.out_dir);
    const std::string stem = stem_of(path);
    write_text(*opt.out_dir / (stem + ".samples.smt2"), format_models(f, result.solutions));
    nlohmann::json report = sample_report(f, result, opt.sampler);
    report["benchmark"] = rec.benchmark;
    report["logic"] = rec.logic;
    report["parse_time_s"] = rec.parse_time_s;
    if (!f.warnings().empty()) report["warnings"] = f.warnings();
    if (opt.oracle_check)
      report["oracle"] = oracle_section(f, result, opt.sampler.target_coverage, opt.oracle_cap);
    write_text(*opt.out_dir / (stem + ".report.json"), report.dump(2) + "\n");
    if (cnf) write_text(*opt.out_dir / (stem + ".cnf"), to_dimacs(*cnf));
  } catch (const std::exception& e) {
    rec.reason = StopReason::Error;
    rec.achieved = false;
    rec.error = e.what();
  }
  return rec;
}

std::vector<SuiteRow> aggregate(std::span<const BenchRecord> records) {
  std::vector<SuiteRow> rows;
  std::vector<double> sol_sum, time_sum;
  for (const BenchRecord& rec : records) {
    auto it = std::find_if(rows.begin(), rows.end(),
                           [&](const SuiteRow& row) { return row.r == rec.r; });
    std::size_t k = static_cast<std::size_t>(it - rows.begin());
    if (it == rows.end()) {
      rows.push_back({rec.r, 0, 0, std::nullopt, std::nullopt});
      sol_sum.push_back(0);
      time_sum.push_back(0);
    }
    ++rows[k].attempted;
    if (!rec.achieved) continue;
    ++rows[k].suc;
    sol_sum[k] += static_cast<double>(rec.num_solutions);
    time_sum[k] += rec.time_s;
  }
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (rows[k].suc == 0) continue;
    rows[k].mean_solutions = sol_sum[k] / static_cast<double>(rows[k].suc);
    rows[k].mean_time = time_sum[k] / static_cast<double>(rows[k].suc);
  }
  return rows;
}

SuiteResult run_suite(const fs::path& dir, const RunOptions& opt,
                      std::span<const double> targets) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string name = entry.path().filename().string();
    if (!name.ends_with(".smt2") || name.ends_with(".samples.smt2")) continue;
    files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());

  SuiteResult suite;
  for (double r : targets) {
    for (const fs::path& file : files) {
      RunOptions run = opt;
      run.sampler.target_coverage = r;
      if (opt.out_dir)
        run.out_dir = *opt.out_dir / fmt::format("r{:g}", r);
      suite.records.push_back(run_file(file, run));
    }
  }
  suite.rows = aggregate(suite.records);
  return suite;
}

std::string records_csv(std::span<const BenchRecord> records, bool omit_time) {
  std::string out = "benchmark,logic,mode,r,achieved,num_solutions,time_s,coverage_star,reason\n";
  for (const BenchRecord& rec : records) {
    out += fmt::format("{},{},{},{:g},{},{},{},{:.6f},{}\n", csv_field(rec.benchmark),
                       csv_field(rec.logic), mode_name(rec.mode), rec.r,
                       rec.achieved ? "true" : "false", rec.num_solutions,
                       omit_time ? std::string("-") : fmt::format("{:.3f}", rec.time_s),
                       rec.coverage_star, reason_name(rec.reason));
  }
  return out;
}

std::string aggregate_csv(std::span<const SuiteRow> rows, bool omit_time) {
  std::string out = "r,attempted,suc,mean_sol,mean_time\n";
  for (const SuiteRow& row : rows) {
    std::string sol = row.mean_solutions ? fmt::format("{:.2f}", *row.mean_solutions) : "-";
    std::string time = row.mean_time && !omit_time ? fmt::format("{:.3f}", *row.mean_time) : "-";
    out += fmt::format("{:g},{},{},{},{}\n", row.r, row.attempted, row.suc, sol, time);
  }
  return out;
}

nlohmann::json record_json(const BenchRecord& rec) {
  return {{"benchmark", rec.benchmark},
          {"logic", rec.logic},
          {"mode", mode_name(rec.mode)},
          {"r", rec.r},
          {"achieved", rec.achieved},
          {"num_solutions", rec.num_solutions},
          {"time_s", rec.time_s},
          {"parse_time_s", rec.parse_time_s},
          {"coverage_star", rec.coverage_star},
          {"reason", reason_name(rec.reason)},
          {"error", rec.error}};
}

nlohmann::json suite_json(const SuiteResult& suite, bool omit_time) {
  nlohmann::json records = nlohmann::json::array();
  for (const BenchRecord& rec : suite.records) {
    nlohmann::json j = record_json(rec);
    if (omit_time) {
      j["time_s"] = nullptr;
      j["parse_time_s"] = nullptr;
    }
    records.push_back(std::move(j));
  }
  nlohmann::json rows = nlohmann::json::array();
  for (const SuiteRow& row : suite.rows) {
    nlohmann::json j = {{"r", row.r}, {"attempted", row.attempted}, {"suc", row.suc}};
    j["mean_sol"] = row.mean_solutions ? nlohmann::json(*row.mean_solutions) : nlohmann::json();
    j["mean_time"] = row.mean_time && !omit_time ? nlohmann::json(*row.mean_time)
                                                 : nlohmann::json();
    rows.push_back(std::move(j));
  }
  return {{"records", records}, {"aggregate", rows}};
}

}  // namespace pansampler
