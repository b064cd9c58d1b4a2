#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <boost/dynamic_bitset.hpp>
#include <nlohmann/json.hpp>

#include "pansampler/term.hpp"
#include "pansampler/value.hpp"

namespace pansampler {

/// One countable bit position: bit `bit` of DAG node `node`.
struct AstBitEntry {
  TermId node;
  std::uint32_t bit;
};

/// The AST-bit universe of a formula. Countable nodes are the Bool/BitVec
/// nodes reachable from the assertions, excluding constant literals; each
/// hash-consed node counts once. Entry k owns slots 2k (value 0) and 2k+1
/// (value 1).
struct AstBitUniverse {
  std::vector<TermId> nodes;  // ascending ids
  std::vector<AstBitEntry> entries;

  std::size_t slot_count() const { return 2 * entries.size(); }
};

using SlotSet = boost::dynamic_bitset<std::uint64_t>;

AstBitUniverse build_universe(const Formula& f);

/// Slots covered by one assignment: exactly one slot per entry.
SlotSet cover_set(const Formula& f, const AstBitUniverse& u,
                  const Assignment& a);

/// Union of the cover sets of absorbed solutions.
class CoverState {
 public:
  CoverState() = default;
  explicit CoverState(const AstBitUniverse& u) : covered_(u.slot_count()) {}

  /// Throws std::invalid_argument when the slot count differs.
  void absorb(const SlotSet& slots);

  const SlotSet& covered() const { return covered_; }
  std::size_t covered_count() const { return covered_.count(); }
  std::size_t slot_count() const { return covered_.size(); }
  std::size_t num_solutions() const { return num_solutions_; }

 private:
  SlotSet covered_;
  std::size_t num_solutions_ = 0;
};

/// |covered| / |ASTBits|; 0 before any solution. A formula with no countable
/// node is fully covered by its first solution.
double coverage_star(const CoverState& c, const AstBitUniverse& u);

/// Number of slots of `slots` not yet covered by c.
std::size_t ast_score(const CoverState& c, const SlotSet& slots);
std::size_t ast_score(const Formula& f, const AstBitUniverse& u,
                      const CoverState& c, const Assignment& a);

/// Sum of Hamming distances between the tracked variable bits of `a` and
/// each assignment in `history`.
std::size_t manhattan_score(const Formula& f, std::span<const Assignment> history,
                            const Assignment& a);

/// {covered_slots, total_slots, coverage_star, num_solutions}
nlohmann::json coverage_report(const CoverState& c, const AstBitUniverse& u);

}  // namespace pansampler
