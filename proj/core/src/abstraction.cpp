#include "pansampler/abstraction.hpp"

#include <map>
#include <set>
#include <string>

#include "pansampler/evaluator.hpp"

namespace pansampler {

namespace {

struct PoolEntry {
  TermId index;
  TermId origin;
  std::size_t witness;
};

// Pool key of an index sort: 0 for Bool, the width for bit-vectors.
std::uint32_t sort_key(const Sort& s) { return s.is_bool() ? 0 : s.width(); }

}  // namespace

Abstraction::Abstraction(const Formula& f) : map_(f.terms().size(), kNoTerm) {
  abstracted_.set_logic(f.logic());
  for (const Symbol& s : f.symbols()) abstracted_.declare(s.name, s.sort);
  TermStore& out = abstracted_.terms();
  const TermStore& in = f.terms();

  std::map<std::pair<TermId, TermId>, std::size_t> reads;
  std::map<std::pair<TermId, TermId>, std::size_t> equalities;
  std::vector<std::pair<TermId, TermId>> pool_terms;  // (abstract, original)

  auto equality_atom = [&](TermId a, TermId b) {
    auto key = std::minmax(a, b);
    if (auto it = equalities.find(key); it != equalities.end())
      return atoms_[it->second].var;
    AbstractAtom atom;
    atom.kind = AtomKind::ArrayEq;
    atom.lhs = key.first;
    atom.rhs = key.second;
    std::size_t k = add_atom(std::move(atom), Sort::boolean(), "arreq");
    equalities.emplace(key, k);
    return atoms_[k].var;
  };

  for (TermId t : reachable_terms(f)) {
    const Node& n = in[t];
    std::vector<TermId> ch;
    for (TermId c : n.children) ch.push_back(map_[c]);
    switch (n.op) {
      case Op::Var:
        if (n.sort.is_scalar()) map_[t] = abstracted_.symbol(n.param0).term;
        break;
      case Op::Const:
        map_[t] = out.mk_const(n.value, n.sort.is_bool());
        break;
      case Op::Store:
        pool_terms.emplace_back(ch[1], n.children[1]);
        break;
      case Op::Select: {
        pool_terms.emplace_back(ch[1], n.children[1]);
        auto key = std::make_pair(n.children[0], ch[1]);
        if (auto it = reads.find(key); it != reads.end()) {
          map_[t] = atoms_[it->second].var;
          break;
        }
        AbstractAtom atom;
        atom.kind = AtomKind::Select;
        atom.original = t;
        atom.array = n.children[0];
        atom.index = ch[1];
        atom.index_origin = n.children[1];
        std::size_t k = add_atom(std::move(atom), n.sort, "sel");
        reads.emplace(key, k);
        map_[t] = atoms_[k].var;
        break;
      }
      case Op::Apply: {
        AbstractAtom atom;
        atom.kind = AtomKind::Apply;
        atom.original = t;
        atom.fun = n.param0;
        atom.args = ch;
        map_[t] = atoms_[add_atom(std::move(atom), n.sort, "app")].var;
        break;
      }
      case Op::Ite:
        if (n.sort.is_scalar()) map_[t] = out.mk(Op::Ite, ch);
        break;
      case Op::Eq:
      case Op::Distinct: {
        if (in[n.children[0]].sort.is_scalar()) {
          map_[t] = out.mk(n.op, ch);
          break;
        }
        std::vector<TermId> parts;
        const auto& c = n.children;
        if (n.op == Op::Eq) {
          for (std::size_t i = 0; i + 1 < c.size(); ++i)
            parts.push_back(equality_atom(c[i], c[i + 1]));
        } else {
          for (std::size_t i = 0; i < c.size(); ++i)
            for (std::size_t j = i + 1; j < c.size(); ++j)
              parts.push_back(out.mk_not(equality_atom(c[i], c[j])));
        }
        map_[t] = out.mk_and(std::move(parts));
        break;
      }
      default:
        map_[t] = out.mk(n.op, ch, n.param0, n.param1);
        break;
    }
  }
  for (TermId a : f.assertions()) abstracted_.add_assertion(map_[a]);

  // Extensionality: witnesses first, so every equality sees every witness.
  std::vector<std::size_t> eq_atoms;
  for (std::size_t k = 0; k < atoms_.size(); ++k)
    if (atoms_[k].kind == AtomKind::ArrayEq) eq_atoms.push_back(k);
  if (eq_atoms.empty()) return;

  std::map<std::uint32_t, std::vector<PoolEntry>> pool;
  std::map<std::pair<std::uint32_t, TermId>, bool> pooled;
  auto add_pool = [&](const Sort& sort, PoolEntry e) {
    if (pooled.emplace(std::make_pair(sort_key(sort), e.index), true).second)
      pool[sort_key(sort)].push_back(e);
  };
  for (auto [abs_index, origin] : pool_terms)
    add_pool(in[origin].sort, {abs_index, origin, kNoAtom});

  std::vector<std::size_t> witness_of(atoms_.size(), kNoAtom);
  for (std::size_t k : eq_atoms) {
    AbstractAtom w;
    w.kind = AtomKind::Witness;
    w.lhs = atoms_[k].lhs;
    w.rhs = atoms_[k].rhs;
    w.equality = k;
    const Sort index_sort = in[w.lhs].sort.index();
    std::size_t wk = add_atom(std::move(w), index_sort, "idx");
    witness_of[k] = wk;
    add_pool(index_sort, {atoms_[wk].var, kNoTerm, wk});
  }

  auto read = [&](TermId array, const PoolEntry& e) {
    auto key = std::make_pair(array, e.index);
    if (auto it = reads.find(key); it != reads.end()) return atoms_[it->second].var;
    std::size_t k = derived_read(array, e.index, e.origin, e.witness,
                                 in[array].sort.element());
    reads.emplace(key, k);
    return atoms_[k].var;
  };

  for (std::size_t k : eq_atoms) {
    const TermId lhs = atoms_[k].lhs, rhs = atoms_[k].rhs;
    const TermId e = atoms_[k].var;
    const Sort& index_sort = in[lhs].sort.index();
    std::size_t wk = witness_of[k];
    PoolEntry own{atoms_[wk].var, kNoTerm, wk};
    TermId differ = out.mk_not(out.mk_eq(read(lhs, own), read(rhs, own)));
    abstracted_.add_assertion(out.mk_or({e, differ}));
    const auto entries = pool[sort_key(index_sort)];
    for (const PoolEntry& p : entries)
      abstracted_.add_assertion(
          out.mk_implies(e, out.mk_eq(read(lhs, p), read(rhs, p))));
  }
}

std::size_t Abstraction::add_atom(AbstractAtom atom, const Sort& sort,
                                  const char* prefix) {
  std::string name;
  do {
    name = std::string(prefix) + "!" + std::to_string(next_name_++);
  } while (abstracted_.find_symbol(name));
  atom.fresh = abstracted_.declare(name, sort);
  atom.var = abstracted_.symbol(atom.fresh).term;
  atoms_.push_back(std::move(atom));
  return atoms_.size() - 1;
}

std::size_t Abstraction::derived_read(TermId array, TermId index,
                                      TermId index_origin, std::size_t witness,
                                      const Sort& element) {
  AbstractAtom atom;
  atom.kind = AtomKind::Select;
  atom.array = array;
  atom.index = index;
  atom.index_origin = index_origin;
  atom.witness = witness;
  return add_atom(std::move(atom), element, "rd");
}

std::vector<std::size_t> Abstraction::read_atoms() const {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < atoms_.size(); ++k)
    if (atoms_[k].kind == AtomKind::Select) out.push_back(k);
  return out;
}

BitVector first_difference(const ArrayValue& a, const ArrayValue& b,
                           std::uint32_t index_width) {
  std::set<BitVector> keys;
  for (const auto& kv : a.overrides) keys.insert(kv.first);
  for (const auto& kv : b.overrides) keys.insert(kv.first);
  for (const BitVector& k : keys)
    if (!(a.read(k) == b.read(k))) return k;
  BitVector candidate(index_width);
  if (a.default_value == b.default_value) return candidate;
  const BitVector one = BitVector::from_u64(index_width, 1);
  for (const BitVector& k : keys) {
    if (!(k == candidate)) break;
    candidate = candidate.add(one);
    if (candidate.is_zero()) return candidate;  // every cell is touched
  }
  return candidate;
}

Assignment project_to_abstraction(const Formula& f, const Abstraction& abs,
                                  const Assignment& a) {
  Assignment out = Assignment::zeros(abs.abstracted());
  for (SymbolId s = 0; s < f.symbols().size(); ++s) out[s] = a[s];
  Evaluator ev(f, a);
  for (const AbstractAtom& atom : abs.atoms()) {
    BitVector value;
    switch (atom.kind) {
      case AtomKind::Select: {
        BitVector index = atom.witness != kNoAtom
                              ? out.scalar(abs.atoms()[atom.witness].fresh)
                              : ev.scalar(atom.index_origin);
        value = ev.array(atom.array).read(index);
        break;
      }
      case AtomKind::Apply:
        value = ev.scalar(atom.original);
        break;
      case AtomKind::ArrayEq:
        value = BitVector::from_bool(
            arrays_equal(ev.array(atom.lhs), ev.array(atom.rhs),
                         f.terms()[atom.lhs].sort.index().width()));
        break;
      case AtomKind::Witness:
        value = first_difference(ev.array(atom.lhs), ev.array(atom.rhs),
                                 f.terms()[atom.lhs].sort.index().width());
        break;
    }
    out.set_scalar(atom.fresh, std::move(value));
  }
  return out;
}

}  // namespace pansampler
