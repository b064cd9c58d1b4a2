#include "pansampler/theory.hpp"

#include <limits>
#include <map>
#include <stdexcept>
#include <unordered_map>

#include "pansampler/evaluator.hpp"

namespace pansampler {

namespace {

struct BaseRead {
  BitVector value;
  TermId index;
  TermId var;
  std::vector<TermId> conds;
};

Assignment base_completion(const Formula& f, const Assignment& a) {
  Assignment out = Assignment::zeros(f);
  for (SymbolId s : f.scalar_symbols()) out[s] = a[s];
  return out;
}

TermId premise_eq(TermStore& store, TermId x, TermId y) {
  return x == y ? kNoTerm : store.mk_eq(x, y);
}

TermId make_lemma(TermStore& store, std::vector<TermId> premises, TermId lhs,
                  TermId rhs) {
  std::vector<TermId> live;
  for (TermId p : premises)
    if (p != kNoTerm) live.push_back(p);
  TermId conclusion = store.mk_eq(lhs, rhs);
  if (live.empty()) return conclusion;
  return store.mk_implies(store.mk_and(std::move(live)), conclusion);
}

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r = a + b;
  return r < a ? std::numeric_limits<std::uint64_t>::max() : r;
}

std::uint64_t pairs(std::uint64_t n) {
  if (n < 2) return 0;
  std::uint64_t a = n, b = n - 1;
  (a % 2 == 0 ? a : b) /= 2;
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a)
    return std::numeric_limits<std::uint64_t>::max();
  return a * b;
}

}  // namespace

TheoryVerdict check_arrays(const Formula& f, Abstraction& abs,
                           const Assignment& a, bool all_violations) {
  TheoryVerdict verdict;
  const TermStore& in = f.terms();
  TermStore& out = abs.terms();
  Evaluator ev(out, a);
  std::map<SymbolId, std::map<BitVector, BaseRead>> bases;

  for (std::size_t k : abs.read_atoms()) {
    const AbstractAtom& atom = abs.atoms()[k];
    const BitVector idx = ev.scalar(atom.index);
    const BitVector val = ev.scalar(atom.var);
    std::vector<TermId> conds;
    TermId node = atom.array;
    while (true) {
      const Node& n = in[node];
      if (n.op == Op::Store) {
        TermId j = abs.abstract_term(n.children[1]);
        TermId v = abs.abstract_term(n.children[2]);
        if (ev.scalar(j) == idx) {
          if (!(ev.scalar(v) == val)) {
            std::vector<TermId> premises = conds;
            premises.push_back(premise_eq(out, atom.index, j));
            verdict.lemmas.push_back(
                make_lemma(out, std::move(premises), atom.var, v));
          }
          break;
        }
        conds.push_back(out.mk_not(out.mk_eq(atom.index, j)));
        node = n.children[0];
      } else if (n.op == Op::Ite) {
        TermId c = abs.abstract_term(n.children[0]);
        bool taken = ev.truth(c);
        conds.push_back(taken ? c : out.mk_not(c));
        node = n.children[taken ? 1 : 2];
      } else if (n.op == Op::Var) {
        auto& reads = bases[n.param0];
        auto it = reads.find(idx);
        if (it == reads.end()) {
          reads.emplace(idx, BaseRead{val, atom.index, atom.var, std::move(conds)});
        } else if (!(it->second.value == val)) {
          std::vector<TermId> premises = it->second.conds;
          premises.insert(premises.end(), conds.begin(), conds.end());
          premises.push_back(premise_eq(out, it->second.index, atom.index));
          verdict.lemmas.push_back(
              make_lemma(out, std::move(premises), it->second.var, atom.var));
        }
        break;
      } else {
        throw std::logic_error("unexpected array operator in read trace");
      }
    }
    if (!verdict.lemmas.empty() && !all_violations) return verdict;
  }
  if (!verdict.lemmas.empty()) return verdict;

  verdict.completed = base_completion(f, a);
  for (SymbolId s : f.array_symbols()) {
    const Sort& sort = f.symbol(s).sort;
    ArrayValue value{BitVector(sort.element().width()), {}};
    if (auto it = bases.find(s); it != bases.end())
      for (const auto& [idx, read] : it->second) value.overrides.emplace(idx, read.value);
    verdict.completed[s] = std::move(value);
  }
  return verdict;
}

TheoryVerdict check_functions(const Formula& f, Abstraction& abs,
                              const Assignment& a, bool all_violations) {
  TheoryVerdict verdict;
  TermStore& out = abs.terms();
  Evaluator ev(out, a);
  std::map<SymbolId, std::map<std::vector<BitVector>, std::vector<std::size_t>>> tables;

  for (std::size_t k = 0; k < abs.atoms().size(); ++k) {
    const AbstractAtom& atom = abs.atoms()[k];
    if (atom.kind != AtomKind::Apply) continue;
    std::vector<BitVector> args;
    for (TermId t : atom.args) args.push_back(ev.scalar(t));
    std::vector<std::size_t>& same = tables[atom.fun][std::move(args)];
    for (std::size_t j : same) {
      const AbstractAtom& prior = abs.atoms()[j];
      if (ev.scalar(prior.var) == ev.scalar(atom.var)) continue;
      std::vector<TermId> premises;
      for (std::size_t i = 0; i < atom.args.size(); ++i)
        premises.push_back(premise_eq(out, prior.args[i], atom.args[i]));
      verdict.lemmas.push_back(make_lemma(out, std::move(premises), prior.var, atom.var));
      if (!all_violations) return verdict;
    }
    same.push_back(k);
  }
  if (!verdict.lemmas.empty()) return verdict;

  verdict.completed = base_completion(f, a);
  for (SymbolId s : f.function_symbols()) {
    const Sort& sort = f.symbol(s).sort;
    FunValue value{BitVector(sort.range().width()), {}};
    if (auto it = tables.find(s); it != tables.end())
      for (const auto& [args, ks] : it->second)
        value.table.emplace(args, ev.scalar(abs.atoms()[ks.front()].var));
    verdict.completed[s] = std::move(value);
  }
  return verdict;
}

std::uint64_t axiom_instance_bound(const Formula& f, const Abstraction& abs) {
  const TermStore& in = f.terms();
  // Per array term: routes ending at a store hit, and routes into each base.
  struct Routes {
    std::uint64_t stores = 0;
    std::map<SymbolId, std::uint64_t> bases;
  };
  std::unordered_map<TermId, Routes> memo;
  auto routes = [&](auto&& self, TermId t) -> const Routes& {
    if (auto it = memo.find(t); it != memo.end()) return it->second;
    const Node& n = in[t];
    Routes r;
    auto merge = [&r](const Routes& sub) {
      r.stores = sat_add(r.stores, sub.stores);
      for (const auto& [b, c] : sub.bases) r.bases[b] = sat_add(r.bases[b], c);
    };
    if (n.op == Op::Store) {
      Routes sub = self(self, n.children[0]);
      merge(sub);
      r.stores = sat_add(r.stores, 1);
    } else if (n.op == Op::Ite) {
      Routes a = self(self, n.children[1]);
      Routes b = self(self, n.children[2]);
      merge(a);
      merge(b);
    } else if (n.op == Op::Var) {
      r.bases[n.param0] = 1;
    }
    return memo.emplace(t, std::move(r)).first->second;
  };

  std::uint64_t bound = 0;
  std::map<SymbolId, std::uint64_t> base_total;
  std::map<SymbolId, std::uint64_t> apps;
  for (const AbstractAtom& atom : abs.atoms()) {
    if (atom.kind == AtomKind::Select) {
      const Routes& r = routes(routes, atom.array);
      bound = sat_add(bound, r.stores);
      for (const auto& [b, c] : r.bases) base_total[b] = sat_add(base_total[b], c);
    } else if (atom.kind == AtomKind::Apply) {
      apps[atom.fun] = sat_add(apps[atom.fun], 1);
    }
  }
  for (const auto& [b, n] : base_total) bound = sat_add(bound, pairs(n));
  for (const auto& [fun, n] : apps) bound = sat_add(bound, pairs(n));
  return bound;
}

}  // namespace pansampler
