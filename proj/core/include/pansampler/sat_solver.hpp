#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>

#include "pansampler/cnf.hpp"

namespace pansampler {

/// Observed 0/1 counts of one tracked SAT variable over sampled solutions.
struct PhaseCounts {
  std::uint32_t count0 = 0;
  std::uint32_t count1 = 0;
  friend bool operator==(const PhaseCounts&, const PhaseCounts&) = default;
};

/// Per-variable phase history. Variables without an entry are untracked.
using BitDistribution = std::map<int, PhaseCounts>;

enum class BiasMode {
  EveryDecision,  // draw a biased phase at every decision
  InitialPhase,   // draw once, then fall back to phase saving
};

struct SolverConfig {
  std::uint64_t seed = 1;
  /// Probability of choosing the minority phase of a tracked variable.
  double bias_p = 0.85;
  BiasMode bias_mode = BiasMode::EveryDecision;
  std::uint64_t conflict_budget = 2'000'000;
  std::optional<std::chrono::steady_clock::time_point> deadline;
  double var_decay = 0.95;
  double clause_decay = 0.999;
  std::uint32_t restart_unit = 100;
};

enum class SatStatus { Sat, Unsat, Aborted };

struct SatResult {
  SatStatus status = SatStatus::Unsat;
  Model model;  // filled when status == Sat
  std::uint64_t conflicts = 0;
  std::uint64_t decisions = 0;
};

/// CDCL solve (two watched literals, VSIDS, first-UIP learning, Luby
/// restarts) whose decision phase leans away from the majority value seen in
/// `dist`. Ties and untracked variables get a uniformly random phase drawn
/// from the seeded generator. Every returned model is checked against all
/// clauses. Throws std::invalid_argument when bias_p is outside [0.5, 1].
SatResult solve(const Cnf& cnf, const BitDistribution& dist,
                const SolverConfig& cfg);

}  // namespace pansampler
