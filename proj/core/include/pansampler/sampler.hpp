#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pansampler/coverage.hpp"
#include "pansampler/diversity_smt.hpp"
#include "pansampler/term.hpp"
#include "pansampler/value.hpp"

namespace pansampler {

enum class Mode {
  PanSampler,  // biased candidates, AST-bit scoring, local optimization
  Alt1,        // blocking clauses instead of the phase bias
  Alt2,        // Manhattan-distance scoring
  Alt3,        // no local optimization
};

std::string_view mode_name(Mode m);
std::optional<Mode> parse_mode(std::string_view name);

enum class StopReason { Target, MaxSolutions, Timeout, Stall, Unsat, Error };

std::string_view reason_name(StopReason r);

/// Candidate set of one iteration, reported before absorption.
struct CandidateView {
  std::size_t iteration;
  std::span<const Assignment> candidates;
  std::span<const std::size_t> scores;
  const CoverState& state;
  std::size_t chosen;
};

struct SamplerConfig {
  std::size_t lambda = 50;
  double target_coverage = 0.995;
  std::size_t max_solutions = 1000;
  double time_budget = 3600.0;  // seconds
  Mode mode = Mode::PanSampler;
  std::uint64_t seed = 1;
  double bias_p = 0.85;
  BiasMode bias_mode = BiasMode::EveryDecision;
  std::uint64_t conflict_budget = 2'000'000;
  /// When set, the target is measured as covered slots over this count
  /// (for example an exact valid-bit count) instead of all slots.
  std::optional<std::size_t> coverage_denominator;
  std::function<void(const CandidateView&)> on_candidates;

  /// Throws std::invalid_argument on out-of-range fields.
  void validate() const;
};

struct PhaseTimes {
  double sampling = 0;
  double evaluation = 0;
  double optimization = 0;
};

struct SampleResult {
  std::vector<Assignment> solutions;
  std::vector<double> coverage_star_trace;  // after each absorbed solution
  bool achieved = false;
  StopReason reason = StopReason::Error;
  std::string error;
  std::size_t iterations = 0;
  double wall_time = 0;
  PhaseTimes times;
  std::size_t covered_slots = 0;
  std::size_t total_slots = 0;
  std::size_t lemmas = 0;
  std::uint64_t lemma_bound = 0;
  std::size_t max_lemma_rounds = 0;

  double final_coverage() const {
    return coverage_star_trace.empty() ? 0.0 : coverage_star_trace.back();
  }
};

/// Coverage-maximizing sampling loop.
///
/// Each iteration draws lambda candidates from the lazy SMT solver with
/// per-candidate seeds, scores them (new AST-bit slots, or Manhattan
/// distance in Alt2), keeps the lowest-index best, refines it by local
/// optimization and absorbs it. Stops on target, solution cap, time budget,
/// or after lambda consecutive iterations whose chosen solution adds no new
/// slot; such zero-gain solutions are not emitted.
class Sampler {
 public:
  Sampler(const Formula& f, SamplerConfig cfg);

  SampleResult run();

  /// Local optimization of `alpha`: for every Bool/BitVec symbol v, solve
  /// with v forced away from its value and keep the best-scoring result;
  /// ties keep `alpha`.
  Assignment post_opt(const CoverState& c, std::span<const Assignment> solutions,
                      std::span<const Assignment> abstract_history,
                      const Assignment& alpha);

  const AstBitUniverse& universe() const { return universe_; }
  DiversitySmt& smt() { return smt_; }

 private:
  std::size_t score(const CoverState& c, std::span<const Assignment> solutions,
                    const Assignment& a) const;
  SmtOptions options(std::uint64_t seed) const;

  const Formula& f_;
  SamplerConfig cfg_;
  AstBitUniverse universe_;
  DiversitySmt smt_;
  std::optional<std::chrono::steady_clock::time_point> deadline_;
};

SampleResult sample(const Formula& f, const SamplerConfig& cfg);

/// Free-standing local optimization with a fresh solver.
Assignment post_opt(const Formula& f, const AstBitUniverse& u,
                    const CoverState& c, std::span<const Assignment> solutions,
                    const Assignment& alpha, const SamplerConfig& cfg = {});

}  // namespace pansampler
