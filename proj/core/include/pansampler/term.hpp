#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "pansampler/bitvector.hpp"
#include "pansampler/sort.hpp"

namespace pansampler {

using TermId = std::uint32_t;
using SymbolId = std::uint32_t;
inline constexpr TermId kNoTerm = std::numeric_limits<TermId>::max();

enum class Op : std::uint8_t {
  Var,
  Const,
  BvAdd,
  BvSub,
  BvMul,
  BvUdiv,
  BvUrem,
  BvAnd,
  BvOr,
  BvXor,
  BvNot,
  BvNeg,
  BvShl,
  BvLshr,
  BvAshr,
  BvUlt,
  BvUle,
  BvUgt,
  BvUge,
  BvSlt,
  BvSle,
  BvSgt,
  BvSge,
  Concat,
  Extract,
  ZeroExtend,
  SignExtend,
  Ite,
  Eq,
  Distinct,
  And,
  Or,
  Xor,
  Not,
  Implies,
  Select,
  Store,
  Apply,
};

/// SMT-LIB spelling of an operator ("bvadd", "=", "select", ...).
std::string_view op_name(Op op);

/// Raised by the term builder when an application is ill-sorted or has the
/// wrong arity.
class SortError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Node {
  Op op = Op::Const;
  Sort sort;
  std::vector<TermId> children;
  // Extract: (hi, lo). Zero/SignExtend: (amount, 0). Var/Apply: (symbol, 0).
  std::uint32_t param0 = 0;
  std::uint32_t param1 = 0;
  BitVector value;  // Const only
};

/// Append-only, structurally hash-consed term DAG. Children always have
/// smaller ids than their parents, so id order is a topological order.
class TermStore {
 public:
  std::size_t size() const { return nodes_.size(); }
  const Node& node(TermId id) const { return nodes_[id]; }
  const Node& operator[](TermId id) const { return nodes_[id]; }

  TermId mk_var(SymbolId symbol, const Sort& sort);
  TermId mk_const(const BitVector& value, bool is_bool);
  TermId mk_bool(bool value) { return mk_const(BitVector::from_bool(value), true); }
  TermId mk_bv(std::uint32_t width, std::uint64_t value) {
    return mk_const(BitVector::from_u64(width, value), false);
  }

  /// Sort-checked application. Throws SortError.
  TermId mk(Op op, std::vector<TermId> children, std::uint32_t param0 = 0,
            std::uint32_t param1 = 0);
  TermId mk_apply(SymbolId fun, const Sort& fun_sort,
                  std::vector<TermId> args);

  TermId mk_not(TermId t) { return mk(Op::Not, {t}); }
  TermId mk_eq(TermId a, TermId b) { return mk(Op::Eq, {a, b}); }
  TermId mk_and(std::vector<TermId> ts);
  TermId mk_or(std::vector<TermId> ts);
  TermId mk_implies(TermId a, TermId b) { return mk(Op::Implies, {a, b}); }

 private:
  TermId intern(Node node);
  static std::size_t hash_node(const Node& n);

  std::vector<Node> nodes_;
  std::unordered_multimap<std::size_t, TermId> index_;
};

struct Symbol {
  std::string name;
  Sort sort;
  TermId term = kNoTerm;  // Var node; kNoTerm for function symbols
};

/// One tracked variable bit x(i); Bool variables have the single bit 0.
struct TrackedBit {
  SymbolId symbol;
  std::uint32_t bit;
  friend bool operator==(const TrackedBit&, const TrackedBit&) = default;
};

/// A set of Bool-sorted assertions over declared symbols, interpreted as
/// their conjunction.
class Formula {
 public:
  TermStore& terms() { return terms_; }
  const TermStore& terms() const { return terms_; }

  /// Declares a symbol; non-function symbols get a Var node.
  /// Throws SortError on a duplicate name.
  SymbolId declare(std::string name, const Sort& sort);
  std::optional<SymbolId> find_symbol(std::string_view name) const;
  const std::vector<Symbol>& symbols() const { return symbols_; }
  const Symbol& symbol(SymbolId id) const { return symbols_[id]; }

  /// Throws SortError unless the term is Bool-sorted.
  void add_assertion(TermId t);
  const std::vector<TermId>& assertions() const { return assertions_; }

  const std::string& logic() const { return logic_; }
  void set_logic(std::string logic) { logic_ = std::move(logic); }

  std::vector<std::string>& warnings() { return warnings_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  /// Bool/BitVec symbols in declaration order.
  std::vector<SymbolId> scalar_symbols() const;
  std::vector<SymbolId> array_symbols() const;
  std::vector<SymbolId> function_symbols() const;

 private:
  TermStore terms_;
  std::vector<Symbol> symbols_;
  std::unordered_map<std::string, SymbolId> by_name_;
  std::vector<TermId> assertions_;
  std::string logic_;
  std::vector<std::string> warnings_;
};

/// Tracked bits of every Bool/BitVec variable: declaration order, then bit
/// index ascending (bit 0 is least significant).
std::vector<TrackedBit> var_bits(const Formula& f);

/// Ids of all nodes reachable from the assertions, ascending.
std::vector<TermId> reachable_terms(const Formula& f);
std::vector<TermId> reachable_terms(const TermStore& store,
                                    std::span<const TermId> roots);

}  // namespace pansampler
