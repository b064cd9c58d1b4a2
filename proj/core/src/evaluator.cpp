#include "pansampler/evaluator.hpp"

#include <stdexcept>

namespace pansampler {

const BitVector& ArrayValue::read(const BitVector& index) const {
  auto it = overrides.find(index);
  return it == overrides.end() ? default_value : it->second;
}

ArrayValue ArrayValue::write(const BitVector& index,
                             const BitVector& value) const {
  ArrayValue out = *this;
  out.overrides.insert_or_assign(index, value);
  return out;
}

bool arrays_equal(const ArrayValue& a, const ArrayValue& b,
                  std::uint32_t index_width) {
  std::size_t touched = 0;
  for (const auto& [k, v] : a.overrides) {
    if (!(v == b.read(k))) return false;
    ++touched;
  }
  for (const auto& [k, v] : b.overrides) {
    if (a.overrides.count(k)) continue;
    if (!(v == a.read(k))) return false;
    ++touched;
  }
  // Some cell is untouched by both: compare the defaults there.
  bool full = index_width < 64 &&
              touched >= (std::size_t{1} << index_width);
  return full || a.default_value == b.default_value;
}

const BitVector& FunValue::apply(const std::vector<BitVector>& args) const {
  auto it = table.find(args);
  return it == table.end() ? default_value : it->second;
}

Value zero_value(const Sort& sort) {
  switch (sort.kind()) {
    case SortKind::Bool:
    case SortKind::BitVec:
      return BitVector(sort.width());
    case SortKind::Array:
      return ArrayValue{BitVector(sort.element().width()), {}};
    case SortKind::Fun:
      return FunValue{BitVector(sort.range().width()), {}};
  }
  return BitVector(1);
}

Assignment Assignment::zeros(const Formula& f) {
  std::vector<Value> values;
  values.reserve(f.symbols().size());
  for (const Symbol& s : f.symbols()) values.push_back(zero_value(s.sort));
  return Assignment(std::move(values));
}

namespace {

bool value_equal(const Value& a, const Value& b) {
  if (a.index() != b.index()) return false;
  if (auto* x = std::get_if<BitVector>(&a)) return *x == std::get<BitVector>(b);
  if (auto* x = std::get_if<ArrayValue>(&a)) {
    const auto& y = std::get<ArrayValue>(b);
    return x->default_value == y.default_value && x->overrides == y.overrides;
  }
  const auto& x = std::get<FunValue>(a);
  const auto& y = std::get<FunValue>(b);
  return x.default_value == y.default_value && x.table == y.table;
}

}  // namespace

bool operator==(const Assignment& a, const Assignment& b) {
  if (a.values_.size() != b.values_.size()) return false;
  for (std::size_t i = 0; i < a.values_.size(); ++i)
    if (!value_equal(a.values_[i], b.values_[i])) return false;
  return true;
}

Evaluator::Evaluator(const TermStore& store, const Assignment& assignment)
    : store_(store),
      assignment_(assignment),
      scalars_(store.size()),
      arrays_(store.size()),
      done_(store.size(), 0) {}

const BitVector& Evaluator::scalar(TermId t) {
  ensure(t);
  return scalars_[t];
}

const ArrayValue& Evaluator::array(TermId t) {
  ensure(t);
  return *arrays_[t];
}

void Evaluator::ensure(TermId t) {
  if (t >= done_.size()) {
    done_.resize(store_.size(), 0);
    scalars_.resize(store_.size());
    arrays_.resize(store_.size());
  }
  if (done_[t]) return;
  std::vector<TermId> stack{t};
  while (!stack.empty()) {
    TermId cur = stack.back();
    if (done_[cur]) {
      stack.pop_back();
      continue;
    }
    bool ready = true;
    for (TermId c : store_[cur].children) {
      if (!done_[c]) {
        stack.push_back(c);
        ready = false;
      }
    }
    if (!ready) continue;
    stack.pop_back();
    compute(cur);
    done_[cur] = 1;
  }
}

void Evaluator::compute(TermId t) {
  const Node& n = store_[t];
  const auto& ch = n.children;
  auto s = [this](TermId c) -> const BitVector& { return scalars_[c]; };
  auto set = [this, t](BitVector v) { scalars_[t] = std::move(v); };
  auto set_bool = [this, t](bool b) { scalars_[t] = BitVector::from_bool(b); };

  switch (n.op) {
    case Op::Var: {
      const Value& v = assignment_[n.param0];
      if (n.sort.is_array()) arrays_[t] = std::get<ArrayValue>(v);
      else set(std::get<BitVector>(v));
      return;
    }
    case Op::Const:
      set(n.value);
      return;
    case Op::BvAdd: {
      BitVector acc = s(ch[0]);
      for (std::size_t i = 1; i < ch.size(); ++i) acc = acc.add(s(ch[i]));
      set(std::move(acc));
      return;
    }
    case Op::BvMul: {
      BitVector acc = s(ch[0]);
      for (std::size_t i = 1; i < ch.size(); ++i) acc = acc.mul(s(ch[i]));
      set(std::move(acc));
      return;
    }
    case Op::BvAnd: {
      BitVector acc = s(ch[0]);
      for (std::size_t i = 1; i < ch.size(); ++i) acc = acc & s(ch[i]);
      set(std::move(acc));
      return;
    }
    case Op::BvOr: {
      BitVector acc = s(ch[0]);
      for (std::size_t i = 1; i < ch.size(); ++i) acc = acc | s(ch[i]);
      set(std::move(acc));
      return;
    }
    case Op::BvXor: {
      BitVector acc = s(ch[0]);
      for (std::size_t i = 1; i < ch.size(); ++i) acc = acc ^ s(ch[i]);
      set(std::move(acc));
      return;
    }
    case Op::BvSub: set(s(ch[0]).sub(s(ch[1]))); return;
    case Op::BvUdiv: set(s(ch[0]).udiv(s(ch[1]))); return;
    case Op::BvUrem: set(s(ch[0]).urem(s(ch[1]))); return;
    case Op::BvNot: set(~s(ch[0])); return;
    case Op::BvNeg: set(s(ch[0]).neg()); return;
    case Op::BvShl: set(s(ch[0]).shl(s(ch[1]))); return;
    case Op::BvLshr: set(s(ch[0]).lshr(s(ch[1]))); return;
    case Op::BvAshr: set(s(ch[0]).ashr(s(ch[1]))); return;
    case Op::BvUlt: set_bool(s(ch[0]).ult(s(ch[1]))); return;
    case Op::BvUle: set_bool(s(ch[0]).ule(s(ch[1]))); return;
    case Op::BvUgt: set_bool(s(ch[1]).ult(s(ch[0]))); return;
    case Op::BvUge: set_bool(s(ch[1]).ule(s(ch[0]))); return;
    case Op::BvSlt: set_bool(s(ch[0]).slt(s(ch[1]))); return;
    case Op::BvSle: set_bool(s(ch[0]).sle(s(ch[1]))); return;
    case Op::BvSgt: set_bool(s(ch[1]).slt(s(ch[0]))); return;
    case Op::BvSge: set_bool(s(ch[1]).sle(s(ch[0]))); return;
    case Op::Concat: set(s(ch[0]).concat(s(ch[1]))); return;
    case Op::Extract: set(s(ch[0]).extract(n.param0, n.param1)); return;
    case Op::ZeroExtend: set(s(ch[0]).zero_extend(n.param0)); return;
    case Op::SignExtend: set(s(ch[0]).sign_extend(n.param0)); return;
    case Op::Ite: {
      TermId pick = s(ch[0]).is_true() ? ch[1] : ch[2];
      if (n.sort.is_array()) arrays_[t] = arrays_[pick];
      else set(s(pick));
      return;
    }
    case Op::Eq: {
      const Sort& cs = store_[ch[0]].sort;
      bool all = true;
      for (std::size_t i = 1; i < ch.size() && all; ++i) {
        all = cs.is_array()
                  ? arrays_equal(*arrays_[ch[0]], *arrays_[ch[i]],
                                 cs.index().width())
                  : s(ch[0]) == s(ch[i]);
      }
      set_bool(all);
      return;
    }
    case Op::Distinct: {
      const Sort& cs = store_[ch[0]].sort;
      bool ok = true;
      for (std::size_t i = 0; i < ch.size() && ok; ++i)
        for (std::size_t j = i + 1; j < ch.size() && ok; ++j)
          ok = cs.is_array() ? !arrays_equal(*arrays_[ch[i]], *arrays_[ch[j]],
                                             cs.index().width())
                             : !(s(ch[i]) == s(ch[j]));
      set_bool(ok);
      return;
    }
    case Op::And: {
      bool v = true;
      for (TermId c : ch) v = v && s(c).is_true();
      set_bool(v);
      return;
    }
    case Op::Or: {
      bool v = false;
      for (TermId c : ch) v = v || s(c).is_true();
      set_bool(v);
      return;
    }
    case Op::Xor: {
      bool v = false;
      for (TermId c : ch) v = v != s(c).is_true();
      set_bool(v);
      return;
    }
    case Op::Not: set_bool(!s(ch[0]).is_true()); return;
    case Op::Implies:
      set_bool(!s(ch[0]).is_true() || s(ch[1]).is_true());
      return;
    case Op::Select: set(arrays_[ch[0]]->read(s(ch[1]))); return;
    case Op::Store:
      arrays_[t] = arrays_[ch[0]]->write(s(ch[1]), s(ch[2]));
      return;
    case Op::Apply: {
      std::vector<BitVector> args;
      args.reserve(ch.size());
      for (TermId c : ch) args.push_back(s(c));
      set(std::get<FunValue>(assignment_[n.param0]).apply(args));
      return;
    }
  }
  throw std::logic_error("unhandled operator in evaluator");
}

Value evaluate(const Formula& f, TermId node, const Assignment& a) {
  Evaluator ev(f, a);
  if (f.terms()[node].sort.is_array()) return ev.array(node);
  return ev.scalar(node);
}

bool satisfies(const Formula& f, const Assignment& a) {
  Evaluator ev(f, a);
  for (TermId t : f.assertions())
    if (!ev.truth(t)) return false;
  return true;
}

}  // namespace pansampler
