#include "pansampler/term.hpp"

#include <algorithm>

namespace pansampler {

Sort Sort::bitvec(std::uint32_t width) {
  if (width == 0) throw SortError("bit-vector width must be positive");
  return Sort(SortKind::BitVec, width, {});
}

Sort Sort::array(const Sort& index, const Sort& element) {
  if (!index.is_scalar() || !element.is_scalar())
    throw SortError("array index and element sorts must be Bool or BitVec");
  return Sort(SortKind::Array, 0, {index, element});
}

Sort Sort::function(std::vector<Sort> domain, const Sort& range) {
  for (const auto& s : domain)
    if (!s.is_scalar())
      throw SortError("function arguments must be Bool or BitVec");
  if (!range.is_scalar())
    throw SortError("function range must be Bool or BitVec");
  domain.push_back(range);
  return Sort(SortKind::Fun, 0, std::move(domain));
}

std::string Sort::to_string() const {
  switch (kind_) {
    case SortKind::Bool:
      return "Bool";
    case SortKind::BitVec:
      return "(_ BitVec " + std::to_string(width_) + ")";
    case SortKind::Array:
      return "(Array " + index().to_string() + " " + element().to_string() +
             ")";
    case SortKind::Fun: {
      std::string s = "(";
      for (std::size_t i = 0; i < domain().size(); ++i) {
        if (i) s += ' ';
        s += domain()[i].to_string();
      }
      return s + ") " + range().to_string();
    }
  }
  return "?";
}

std::string_view op_name(Op op) {
  switch (op) {
    case Op::Var: return "var";
    case Op::Const: return "const";
    case Op::BvAdd: return "bvadd";
    case Op::BvSub: return "bvsub";
    case Op::BvMul: return "bvmul";
    case Op::BvUdiv: return "bvudiv";
    case Op::BvUrem: return "bvurem";
    case Op::BvAnd: return "bvand";
    case Op::BvOr: return "bvor";
    case Op::BvXor: return "bvxor";
    case Op::BvNot: return "bvnot";
    case Op::BvNeg: return "bvneg";
    case Op::BvShl: return "bvshl";
    case Op::BvLshr: return "bvlshr";
    case Op::BvAshr: return "bvashr";
    case Op::BvUlt: return "bvult";
    case Op::BvUle: return "bvule";
    case Op::BvUgt: return "bvugt";
    case Op::BvUge: return "bvuge";
    case Op::BvSlt: return "bvslt";
    case Op::BvSle: return "bvsle";
    case Op::BvSgt: return "bvsgt";
    case Op::BvSge: return "bvsge";
    case Op::Concat: return "concat";
    case Op::Extract: return "extract";
    case Op::ZeroExtend: return "zero_extend";
    case Op::SignExtend: return "sign_extend";
    case Op::Ite: return "ite";
    case Op::Eq: return "=";
    case Op::Distinct: return "distinct";
    case Op::And: return "and";
    case Op::Or: return "or";
    case Op::Xor: return "xor";
    case Op::Not: return "not";
    case Op::Implies: return "=>";
    case Op::Select: return "select";
    case Op::Store: return "store";
    case Op::Apply: return "apply";
  }
  return "?";
}

std::size_t TermStore::hash_node(const Node& n) {
  std::size_t h = static_cast<std::size_t>(n.op) * 0x9e3779b97f4a7c15ULL;
  auto mix = [&h](std::size_t v) {
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  };
  for (TermId c : n.children) mix(c);
  mix(n.param0);
  mix(n.param1);
  mix(static_cast<std::size_t>(n.sort.kind()));
  mix(n.sort.width());
  if (n.op == Op::Const) mix(n.value.hash());
  return h;
}

TermId TermStore::intern(Node node) {
  std::size_t h = hash_node(node);
  auto [lo, hi] = index_.equal_range(h);
  for (auto it = lo; it != hi; ++it) {
    const Node& other = nodes_[it->second];
    if (other.op == node.op && other.children == node.children &&
        other.param0 == node.param0 && other.param1 == node.param1 &&
        other.sort == node.sort &&
        (node.op != Op::Const || other.value == node.value))
      return it->second;
  }
  auto id = static_cast<TermId>(nodes_.size());
  nodes_.push_back(std::move(node));
  index_.emplace(h, id);
  return id;
}

TermId TermStore::mk_var(SymbolId symbol, const Sort& sort) {
  Node n;
  n.op = Op::Var;
  n.sort = sort;
  n.param0 = symbol;
  return intern(std::move(n));
}

TermId TermStore::mk_const(const BitVector& value, bool is_bool) {
  if (is_bool && value.width() != 1)
    throw SortError("Bool constant must have width 1");
  Node n;
  n.op = Op::Const;
  n.sort = is_bool ? Sort::boolean() : Sort::bitvec(value.width());
  n.value = value;
  return intern(std::move(n));
}

namespace {

void require_arity(Op op, std::size_t n, std::size_t min,
                   std::size_t max = 0) {
  bool ok = max == 0 ? n >= min : (n >= min && n <= max);
  if (!ok)
    throw SortError("arity error: '" + std::string(op_name(op)) +
                    "' applied to " + std::to_string(n) + " argument(s)");
}

[[noreturn]] void mismatch(Op op, const std::string& detail) {
  throw SortError("sort mismatch in '" + std::string(op_name(op)) +
                  "': " + detail);
}

}  // namespace

TermId TermStore::mk(Op op, std::vector<TermId> children, std::uint32_t param0,
                     std::uint32_t param1) {
  auto sort_of = [this](TermId t) -> const Sort& { return nodes_[t].sort; };
  auto all_same_bv = [&]() {
    const Sort& s0 = sort_of(children[0]);
    if (!s0.is_bv()) mismatch(op, "expected bit-vector, got " + s0.to_string());
    for (TermId c : children)
      if (sort_of(c) != s0)
        mismatch(op, s0.to_string() + " vs " + sort_of(c).to_string());
    return s0;
  };
  auto all_bool = [&]() {
    for (TermId c : children)
      if (!sort_of(c).is_bool())
        mismatch(op, "expected Bool, got " + sort_of(c).to_string());
  };

  Sort result;
  switch (op) {
    case Op::Var:
    case Op::Const:
    case Op::Apply:
      throw SortError("use the dedicated builder for this operator");

    case Op::BvAdd:
    case Op::BvMul:
    case Op::BvAnd:
    case Op::BvOr:
    case Op::BvXor:
      require_arity(op, children.size(), 2);
      result = all_same_bv();
      break;
    case Op::BvSub:
    case Op::BvUdiv:
    case Op::BvUrem:
    case Op::BvShl:
    case Op::BvLshr:
    case Op::BvAshr:
      require_arity(op, children.size(), 2, 2);
      result = all_same_bv();
      break;
    case Op::BvNot:
    case Op::BvNeg:
      require_arity(op, children.size(), 1, 1);
      result = all_same_bv();
      break;
    case Op::BvUlt:
    case Op::BvUle:
    case Op::BvUgt:
    case Op::BvUge:
    case Op::BvSlt:
    case Op::BvSle:
    case Op::BvSgt:
    case Op::BvSge:
      require_arity(op, children.size(), 2, 2);
      all_same_bv();
      result = Sort::boolean();
      break;
    case Op::Concat: {
      require_arity(op, children.size(), 2, 2);
      const Sort& a = sort_of(children[0]);
      const Sort& b = sort_of(children[1]);
      if (!a.is_bv() || !b.is_bv()) mismatch(op, "expected bit-vectors");
      result = Sort::bitvec(a.width() + b.width());
      break;
    }
    case Op::Extract: {
      require_arity(op, children.size(), 1, 1);
      const Sort& a = sort_of(children[0]);
      if (!a.is_bv()) mismatch(op, "expected bit-vector");
      if (param0 < param1 || param0 >= a.width())
        mismatch(op, "indices out of range for " + a.to_string());
      result = Sort::bitvec(param0 - param1 + 1);
      break;
    }
    case Op::ZeroExtend:
    case Op::SignExtend: {
      require_arity(op, children.size(), 1, 1);
      const Sort& a = sort_of(children[0]);
      if (!a.is_bv()) mismatch(op, "expected bit-vector");
      result = Sort::bitvec(a.width() + param0);
      break;
    }
    case Op::Ite: {
      require_arity(op, children.size(), 3, 3);
      if (!sort_of(children[0]).is_bool()) mismatch(op, "condition not Bool");
      if (sort_of(children[1]) != sort_of(children[2]))
        mismatch(op, sort_of(children[1]).to_string() + " vs " +
                         sort_of(children[2]).to_string());
      result = sort_of(children[1]);
      break;
    }
    case Op::Eq:
    case Op::Distinct: {
      require_arity(op, children.size(), 2);
      const Sort& s0 = sort_of(children[0]);
      for (TermId c : children)
        if (sort_of(c) != s0)
          mismatch(op, s0.to_string() + " vs " + sort_of(c).to_string());
      result = Sort::boolean();
      break;
    }
    case Op::And:
    case Op::Or:
      require_arity(op, children.size(), 1);
      all_bool();
      result = Sort::boolean();
      break;
    case Op::Xor:
      require_arity(op, children.size(), 2);
      all_bool();
      result = Sort::boolean();
      break;
    case Op::Not:
      require_arity(op, children.size(), 1, 1);
      all_bool();
      result = Sort::boolean();
      break;
    case Op::Implies:
      require_arity(op, children.size(), 2, 2);
      all_bool();
      result = Sort::boolean();
      break;
    case Op::Select: {
      require_arity(op, children.size(), 2, 2);
      const Sort& a = sort_of(children[0]);
      if (!a.is_array()) mismatch(op, "expected array");
      if (sort_of(children[1]) != a.index()) mismatch(op, "index sort");
      result = a.element();
      break;
    }
    case Op::Store: {
      require_arity(op, children.size(), 3, 3);
      const Sort& a = sort_of(children[0]);
      if (!a.is_array()) mismatch(op, "expected array");
      if (sort_of(children[1]) != a.index()) mismatch(op, "index sort");
      if (sort_of(children[2]) != a.element()) mismatch(op, "element sort");
      result = a;
      break;
    }
  }
  Node n;
  n.op = op;
  n.sort = std::move(result);
  n.children = std::move(children);
  n.param0 = param0;
  n.param1 = param1;
  return intern(std::move(n));
}

TermId TermStore::mk_apply(SymbolId fun, const Sort& fun_sort,
                           std::vector<TermId> args) {
  if (!fun_sort.is_fun()) throw SortError("apply of a non-function symbol");
  if (args.size() != fun_sort.domain().size())
    throw SortError("arity error: function applied to " +
                    std::to_string(args.size()) + " argument(s), expects " +
                    std::to_string(fun_sort.domain().size()));
  for (std::size_t i = 0; i < args.size(); ++i)
    if (nodes_[args[i]].sort != fun_sort.domain()[i])
      throw SortError("sort mismatch in function argument " +
                      std::to_string(i));
  Node n;
  n.op = Op::Apply;
  n.sort = fun_sort.range();
  n.children = std::move(args);
  n.param0 = fun;
  return intern(std::move(n));
}

TermId TermStore::mk_and(std::vector<TermId> ts) {
  if (ts.empty()) return mk_bool(true);
  if (ts.size() == 1) return ts[0];
  return mk(Op::And, std::move(ts));
}

TermId TermStore::mk_or(std::vector<TermId> ts) {
  if (ts.empty()) return mk_bool(false);
  if (ts.size() == 1) return ts[0];
  return mk(Op::Or, std::move(ts));
}

SymbolId Formula::declare(std::string name, const Sort& sort) {
  if (by_name_.count(name)) throw SortError("symbol redeclared: " + name);
  auto id = static_cast<SymbolId>(symbols_.size());
  Symbol sym{name, sort, kNoTerm};
  if (!sort.is_fun()) sym.term = terms_.mk_var(id, sort);
  symbols_.push_back(std::move(sym));
  by_name_.emplace(std::move(name), id);
  return id;
}

std::optional<SymbolId> Formula::find_symbol(std::string_view name) const {
  auto it = by_name_.find(std::string(name));
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

void Formula::add_assertion(TermId t) {
  if (!terms_[t].sort.is_bool()) throw SortError("assertion is not Bool");
  assertions_.push_back(t);
}

std::vector<SymbolId> Formula::scalar_symbols() const {
  std::vector<SymbolId> out;
  for (SymbolId i = 0; i < symbols_.size(); ++i)
    if (symbols_[i].sort.is_scalar()) out.push_back(i);
  return out;
}

std::vector<SymbolId> Formula::array_symbols() const {
  std::vector<SymbolId> out;
  for (SymbolId i = 0; i < symbols_.size(); ++i)
    if (symbols_[i].sort.is_array()) out.push_back(i);
  return out;
}

std::vector<SymbolId> Formula::function_symbols() const {
  std::vector<SymbolId> out;
  for (SymbolId i = 0; i < symbols_.size(); ++i)
    if (symbols_[i].sort.is_fun()) out.push_back(i);
  return out;
}

std::vector<TrackedBit> var_bits(const Formula& f) {
  std::vector<TrackedBit> bits;
  for (SymbolId s : f.scalar_symbols())
    for (std::uint32_t i = 0; i < f.symbol(s).sort.width(); ++i)
      bits.push_back({s, i});
  return bits;
}

std::vector<TermId> reachable_terms(const TermStore& store,
                                    std::span<const TermId> roots) {
  std::vector<char> seen(store.size(), 0);
  std::vector<TermId> stack(roots.begin(), roots.end());
  while (!stack.empty()) {
    TermId t = stack.back();
    stack.pop_back();
    if (seen[t]) continue;
    seen[t] = 1;
    for (TermId c : store[t].children) stack.push_back(c);
  }
  std::vector<TermId> out;
  for (TermId t = 0; t < store.size(); ++t)
    if (seen[t]) out.push_back(t);
  return out;
}

std::vector<TermId> reachable_terms(const Formula& f) {
  return reachable_terms(f.terms(), f.assertions());
}

}  // namespace pansampler
