#pragma once

#include <optional>
#include <span>
#include <vector>

#include "pansampler/term.hpp"
#include "pansampler/value.hpp"

namespace pansampler {

/// Memoizing bottom-up evaluator for one (formula, assignment) pair.
///
/// Bit-vector semantics follow SMT-LIB FixedSizeBitVectors: arithmetic wraps,
/// shifts by at least the width give zero (sign fill for bvashr), division by
/// zero yields all ones and remainder by zero yields the dividend.
class Evaluator {
 public:
  Evaluator(const TermStore& store, const Assignment& assignment);
  Evaluator(const Formula& f, const Assignment& assignment)
      : Evaluator(f.terms(), assignment) {}

  /// Value of a Bool/BitVec-sorted term.
  const BitVector& scalar(TermId t);
  /// Value of an array-sorted term.
  const ArrayValue& array(TermId t);
  bool truth(TermId t) { return scalar(t).is_true(); }

 private:
  void compute(TermId t);
  void ensure(TermId t);

  const TermStore& store_;
  const Assignment& assignment_;
  std::vector<BitVector> scalars_;
  std::vector<std::optional<ArrayValue>> arrays_;
  std::vector<char> done_;
};

/// Value of any non-function term under a total assignment.
Value evaluate(const Formula& f, TermId node, const Assignment& a);

/// True when every assertion of f evaluates to true.
bool satisfies(const Formula& f, const Assignment& a);

}  // namespace pansampler
