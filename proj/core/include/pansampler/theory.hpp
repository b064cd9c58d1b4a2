#pragma once

#include <cstdint>
#include <vector>

#include "pansampler/abstraction.hpp"
#include "pansampler/term.hpp"
#include "pansampler/value.hpp"

namespace pansampler {

/// Outcome of a theory check on a candidate model of the abstraction.
///
/// Consistent when `lemmas` is empty; `completed` then assigns the original
/// formula, with the checked theory's symbols built from the candidate and
/// all other array/function symbols at zero. Lemmas are Bool terms of the
/// abstraction, valid in the theory and false under the candidate.
struct TheoryVerdict {
  Assignment completed;
  std::vector<TermId> lemmas;

  bool consistent() const { return lemmas.empty(); }
};

/// Read-over-write and read-congruence check over every Select atom.
///
/// Each read is traced from its array term down store and ite chains under
/// the candidate. A store hit whose value differs from the read yields
/// (path conditions and i = j) => read = stored value. Two reads reaching the
/// same base array at equal indices with different values yield
/// (both paths' conditions and i1 = i2) => read1 = read2. Base arrays are
/// completed with default 0 and the observed reads as overrides.
/// Returns the first violation only unless `all_violations` is set.
TheoryVerdict check_arrays(const Formula& f, Abstraction& abs,
                           const Assignment& a, bool all_violations = false);

/// Functional consistency check over every Apply atom: applications of one
/// symbol with equal argument values but different results yield
/// (args pairwise equal) => results equal. Tables default to 0.
TheoryVerdict check_functions(const Formula& f, Abstraction& abs,
                              const Assignment& a, bool all_violations = false);

/// Upper bound on the number of distinct lemmas the two checks can emit for
/// this abstraction: one per (read, route to a store) plus one per pair of
/// routes into the same base array plus one per pair of applications of the
/// same symbol. Saturates at UINT64_MAX.
std::uint64_t axiom_instance_bound(const Formula& f, const Abstraction& abs);

}  // namespace pansampler
