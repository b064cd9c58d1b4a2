#pragma once

#include <map>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "pansampler/cnf.hpp"
#include "pansampler/term.hpp"
#include "pansampler/value.hpp"

namespace pansampler {

class Abstraction;

/// Correspondence between tracked variable bits and SAT variables.
struct BlastMap {
  /// symbol_bits[s][i] is the SAT variable of bit i of scalar symbol s;
  /// empty for array and function symbols.
  std::vector<std::vector<int>> symbol_bits;
  std::unordered_map<int, TrackedBit> reverse;

  int var_of(TrackedBit b) const { return symbol_bits[b.symbol][b.bit]; }
};

/// Tseitin encoder for Bool/BitVec terms.
///
/// Every scalar symbol of the formula receives SAT variables up front, in
/// declaration order, so variable numbering depends only on the input.
/// Constants are folded during encoding and never reach the clause set.
/// Encodings: ripple-carry adders, shift-add multipliers, restoring
/// dividers, barrel shifters.
class BitBlaster {
 public:
  explicit BitBlaster(const Formula& f);

  /// Adds `t` (Bool-sorted) as a top-level constraint.
  void assert_term(TermId t);
  /// Adds a raw clause over SAT variables.
  void add_clause(std::vector<int> lits) { emit(std::move(lits)); }

  /// Literal vector of a scalar term, least significant bit first.
  const std::vector<int>& bits(TermId t);

  const Cnf& cnf() const { return cnf_; }
  const BlastMap& map() const { return map_; }

  static constexpr int kTrue = 0x3fffffff;
  static constexpr int kFalse = -kTrue;

 private:
  using Bits = std::vector<int>;

  void emit(std::vector<int> lits);
  int fresh() { return cnf_.new_var(); }

  int mk_and(int a, int b);
  int mk_or(int a, int b) { return -mk_and(-a, -b); }
  int mk_xor(int a, int b);
  int mk_ite(int c, int t, int e);
  int mk_and_n(std::vector<int> lits);
  int mk_or_n(std::vector<int> lits);

  Bits add(const Bits& a, const Bits& b, int carry_in, int* carry_out = nullptr);
  Bits neg(const Bits& a);
  Bits mul(const Bits& a, const Bits& b);
  void divmod(const Bits& a, const Bits& b, Bits& quot, Bits& rem);
  Bits shift(const Bits& a, const Bits& amount, Op op);
  int ult(const Bits& a, const Bits& b);
  int slt(const Bits& a, const Bits& b);
  int equal(const Bits& a, const Bits& b);
  Bits mux(int c, const Bits& t, const Bits& e);

  void encode(TermId t);

  const TermStore& store_;
  Cnf cnf_;
  BlastMap map_;
  std::vector<Bits> cache_;
  std::vector<char> cached_;
  std::unordered_map<std::uint64_t, int> and_gates_;
  std::unordered_map<std::uint64_t, int> xor_gates_;
};

/// CNF of the abstracted assertions conjoined with `lemmas`.
std::pair<Cnf, BlastMap> bit_blast(const Abstraction& abs,
                                   std::span<const TermId> lemmas);

/// Reads every scalar symbol of `f` back from a SAT model. Array and
/// function symbols get zero values. Throws std::invalid_argument when the
/// model does not cover a tracked bit.
Assignment lift_model(const Formula& f, const BlastMap& map, const Model& model);

}  // namespace pansampler
