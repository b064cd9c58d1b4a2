#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "pansampler/term.hpp"
#include "pansampler/value.hpp"

namespace pansampler {

enum class AtomKind : std::uint8_t {
  Select,   // read of an array term at an index
  Apply,    // uninterpreted function application
  ArrayEq,  // equality between two array terms
  Witness,  // index at which two arrays differ when their equality is false
};

inline constexpr std::size_t kNoAtom = std::numeric_limits<std::size_t>::max();

/// One theory atom replaced by a fresh variable of the abstraction.
///
/// Array terms (`array`, `lhs`, `rhs`) live in the original formula; index
/// and argument terms live in the abstraction.
struct AbstractAtom {
  AtomKind kind = AtomKind::Select;
  SymbolId fresh = 0;      // symbol in the abstraction
  TermId var = kNoTerm;    // its Var node in the abstraction
  TermId original = kNoTerm;  // replaced node; kNoTerm for derived atoms

  // Select
  TermId array = kNoTerm;
  TermId index = kNoTerm;
  TermId index_origin = kNoTerm;   // original index term, if any
  std::size_t witness = kNoAtom;   // Witness atom providing the index

  // ArrayEq and Witness
  TermId lhs = kNoTerm;
  TermId rhs = kNoTerm;
  std::size_t equality = kNoAtom;  // Witness: the ArrayEq it belongs to

  // Apply
  SymbolId fun = 0;
  std::vector<TermId> args;
};

/// Bit-vector abstraction of a formula.
///
/// Selects and applications become fresh scalar variables and array
/// equalities become fresh Booleans. Original symbols keep their ids; fresh
/// symbols are declared after them. Each array equality e = (X = Y) gets a
/// witness index d with the side constraint (not e) => X[d] != Y[d], and for
/// every index term t of the same sort the constraint e => X[t] = Y[t]; these
/// reads are derived Select atoms. Formulas without theory atoms are copied
/// unchanged.
class Abstraction {
 public:
  explicit Abstraction(const Formula& f);

  const Formula& abstracted() const { return abstracted_; }
  /// Store of the abstraction; lemmas are built here.
  TermStore& terms() { return abstracted_.terms(); }

  const std::vector<AbstractAtom>& atoms() const { return atoms_; }

  /// Abstraction node of an original Bool/BitVec node reachable from the
  /// assertions; kNoTerm for array-sorted nodes.
  TermId abstract_term(TermId original) const { return map_[original]; }

  /// Atoms reading through each array term, in creation order.
  std::vector<std::size_t> read_atoms() const;

 private:
  std::size_t add_atom(AbstractAtom atom, const Sort& sort, const char* prefix);
  std::size_t derived_read(TermId array, TermId index, TermId index_origin,
                           std::size_t witness, const Sort& element);

  Formula abstracted_;
  std::vector<TermId> map_;
  std::vector<AbstractAtom> atoms_;
  std::size_t next_name_ = 0;
};

/// Bit-vector abstraction of a full assignment of the original formula:
/// every fresh variable takes the value of its atom.
Assignment project_to_abstraction(const Formula& f, const Abstraction& abs,
                                  const Assignment& a);

/// Smallest index at which two arrays differ, or zero when they are equal.
BitVector first_difference(const ArrayValue& a, const ArrayValue& b,
                           std::uint32_t index_width);

}  // namespace pansampler
