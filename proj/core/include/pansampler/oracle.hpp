#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "pansampler/coverage.hpp"
#include "pansampler/term.hpp"
#include "pansampler/value.hpp"

namespace pansampler::oracle {

/// Reference evaluator: recursive, arbitrary-precision arithmetic, no
/// sharing with the production evaluator. Bool and BitVec results are
/// returned as BitVectors; array terms are compared cell by cell.
class SlowEvaluator {
 public:
  SlowEvaluator(const Formula& f, const Assignment& a);
  ~SlowEvaluator();
  SlowEvaluator(const SlowEvaluator&) = delete;
  SlowEvaluator& operator=(const SlowEvaluator&) = delete;

  BitVector scalar(TermId t);
  bool truth(TermId t) { return scalar(t).is_true(); }

 private:
  struct Impl;
  Impl* impl_;
};

bool satisfies(const Formula& f, const Assignment& a);

/// Cover set computed with the reference evaluator.
SlotSet cover_set(const Formula& f, const AstBitUniverse& u, const Assignment& a);

class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EnumerationReport {
  AstBitUniverse universe;
  std::vector<Assignment> solutions;
  std::vector<SlotSet> covers;  // per solution
  SlotSet valid;                // union of all covers
  std::size_t valid_bits = 0;
  std::size_t domain_bits = 0;
};

/// Number of bits needed to enumerate every assignment of f: scalar widths,
/// full array tables and full function tables.
std::size_t domain_bits(const Formula& f);

/// Exhaustive enumeration over the full domain of every symbol. Array and
/// function values are complete tables. Throws CapExceeded when the domain
/// has more than `domain_bit_cap` bits.
EnumerationReport enumerate_solutions(const Formula& f, std::size_t domain_bit_cap = 20);

/// Covered slots of A over the exact valid-bit count; 0 for an empty A and 1
/// when the formula has no countable bit.
double exact_coverage(const Formula& f, const EnumerationReport& report,
                      std::span<const Assignment> A);

/// Exact increase of Coverage from adding `a` to a state.
double exact_score(const Formula& f, const EnumerationReport& report,
                   const SlotSet& covered, const Assignment& a);

struct MinCoverResult {
  std::size_t cardinality = 0;
  std::vector<std::size_t> chosen;  // indices into report.solutions
  bool exact = true;                // false: greedy bound only
};

/// Smallest subset of the solutions whose cover reaches r of the valid bits.
MinCoverResult min_cover(const EnumerationReport& report, double r);

}  // namespace pansampler::oracle
