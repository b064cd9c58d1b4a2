#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "pansampler/abstraction.hpp"
#include "pansampler/bitblast.hpp"
#include "pansampler/sat_solver.hpp"
#include "pansampler/value.hpp"

namespace pansampler {

/// Per-tracked-bit 0/1 counts of abstraction-level assignments, keyed by the
/// SAT variable of each bit.
BitDistribution distribution_from(std::span<const Assignment> history,
                                  const BlastMap& map);

/// Deterministic seed derivation for independent solver runs.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

enum class SmtStatus { Sat, Unsat, Aborted };

struct SmtResult {
  SmtStatus status = SmtStatus::Unsat;
  Assignment solution;     // over the original formula
  Assignment abstraction;  // over the abstraction
  std::size_t lemma_rounds = 0;
};

struct SmtOptions {
  SolverConfig sat;
  /// Emit every violated instance per round instead of the first.
  bool all_violations = false;
};

/// Lazy SMT solver over one formula: bit-blasts the abstraction, solves with
/// the diversity-biased SAT core, and refines with array/UF lemmas until the
/// candidate is theory-consistent. Lemmas persist across calls.
class DiversitySmt {
 public:
  explicit DiversitySmt(const Formula& f);

  /// One solve. `extra` are Bool terms of the abstraction conjoined for this
  /// call only; every assignment in `blocked` (abstraction level) is excluded
  /// by a clause over all tracked bits. Throws std::logic_error if a
  /// consistent completion fails to satisfy the formula.
  SmtResult solve(const BitDistribution& dist, const SmtOptions& opt,
                  std::span<const TermId> extra = {},
                  std::span<const Assignment> blocked = {});

  /// Distribution of abstraction-level assignments over this solver's map.
  BitDistribution distribution(std::span<const Assignment> history) const {
    return distribution_from(history, base_.map());
  }

  /// Abstraction term (v != value) for an original scalar symbol v.
  TermId deviation(SymbolId v, const BitVector& value);

  Assignment project(const Assignment& full) const {
    return project_to_abstraction(f_, abs_, full);
  }

  const Formula& formula() const { return f_; }
  const Abstraction& abstraction() const { return abs_; }
  const std::vector<TermId>& lemmas() const { return lemmas_; }
  /// Current CNF of the abstraction and learned lemmas.
  const Cnf& cnf() const { return base_.cnf(); }
  const BlastMap& blast_map() const { return base_.map(); }
  std::uint64_t lemma_bound() const { return lemma_bound_; }
  /// Largest number of lemma rounds observed in a single call.
  std::size_t max_rounds() const { return max_rounds_; }

 private:
  const Formula& f_;
  Abstraction abs_;
  BitBlaster base_;
  std::vector<TermId> lemmas_;
  std::uint64_t lemma_bound_;
  std::size_t max_rounds_ = 0;
};

/// Single lazy-SMT solve of `f` biased away from the solutions in `history`.
SmtResult diversity_smt(const Formula& f, std::span<const Assignment> history,
                        const SolverConfig& cfg);

}  // namespace pansampler
