#include "pansampler/bitblast.hpp"

#include <algorithm>
#include <stdexcept>

#include "pansampler/abstraction.hpp"

namespace pansampler {

namespace {

std::uint64_t gate_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint32_t>(b);
}

}  // namespace

BitBlaster::BitBlaster(const Formula& f) : store_(f.terms()) {
  map_.symbol_bits.resize(f.symbols().size());
  for (SymbolId s = 0; s < f.symbols().size(); ++s) {
    const Sort& sort = f.symbol(s).sort;
    if (!sort.is_scalar()) continue;
    for (std::uint32_t i = 0; i < sort.width(); ++i) {
      int v = fresh();
      map_.symbol_bits[s].push_back(v);
      map_.reverse.emplace(v, TrackedBit{s, i});
    }
  }
}

void BitBlaster::emit(std::vector<int> lits) {
  std::vector<int> out;
  out.reserve(lits.size());
  for (int l : lits) {
    if (l == kTrue) return;
    if (l == kFalse) continue;
    out.push_back(l);
  }
  cnf_.add_clause(std::move(out));
}

int BitBlaster::mk_and(int a, int b) {
  if (a == kFalse || b == kFalse || a == -b) return kFalse;
  if (a == kTrue) return b;
  if (b == kTrue || a == b) return a;
  auto key = gate_key(a, b);
  if (auto it = and_gates_.find(key); it != and_gates_.end()) return it->second;
  int g = fresh();
  emit({-g, a});
  emit({-g, b});
  emit({g, -a, -b});
  and_gates_.emplace(key, g);
  return g;
}

int BitBlaster::mk_xor(int a, int b) {
  if (a == kFalse) return b;
  if (b == kFalse) return a;
  if (a == kTrue) return -b;
  if (b == kTrue) return -a;
  if (a == b) return kFalse;
  if (a == -b) return kTrue;
  auto key = gate_key(a, b);
  if (auto it = xor_gates_.find(key); it != xor_gates_.end()) return it->second;
  int g = fresh();
  emit({-g, a, b});
  emit({-g, -a, -b});
  emit({g, -a, b});
  emit({g, a, -b});
  xor_gates_.emplace(key, g);
  return g;
}

int BitBlaster::mk_ite(int c, int t, int e) {
  if (c == kTrue) return t;
  if (c == kFalse) return e;
  if (t == e) return t;
  if (t == kTrue) return mk_or(c, e);
  if (t == kFalse) return mk_and(-c, e);
  if (e == kTrue) return mk_or(-c, t);
  if (e == kFalse) return mk_and(c, t);
  int g = fresh();
  emit({-c, -t, g});
  emit({-c, t, -g});
  emit({c, -e, g});
  emit({c, e, -g});
  emit({-t, -e, g});
  emit({t, e, -g});
  return g;
}

int BitBlaster::mk_and_n(std::vector<int> lits) {
  std::vector<int> live;
  for (int l : lits) {
    if (l == kFalse) return kFalse;
    if (l == kTrue) continue;
    live.push_back(l);
  }
  std::sort(live.begin(), live.end());
  live.erase(std::unique(live.begin(), live.end()), live.end());
  if (live.empty()) return kTrue;
  if (live.size() == 1) return live[0];
  if (live.size() == 2) return mk_and(live[0], live[1]);
  for (std::size_t i = 1; i < live.size(); ++i)
    if (std::binary_search(live.begin(), live.end(), -live[i])) return kFalse;
  int g = fresh();
  std::vector<int> big{g};
  for (int l : live) {
    emit({-g, l});
    big.push_back(-l);
  }
  emit(std::move(big));
  return g;
}

int BitBlaster::mk_or_n(std::vector<int> lits) {
  for (int& l : lits) l = -l;
  return -mk_and_n(std::move(lits));
}

BitBlaster::Bits BitBlaster::add(const Bits& a, const Bits& b, int carry_in,
                                 int* carry_out) {
  Bits sum(a.size());
  int carry = carry_in;
  for (std::size_t i = 0; i < a.size(); ++i) {
    int x = mk_xor(a[i], b[i]);
    sum[i] = mk_xor(x, carry);
    carry = mk_or(mk_and(a[i], b[i]), mk_and(carry, x));
  }
  if (carry_out) *carry_out = carry;
  return sum;
}

BitBlaster::Bits BitBlaster::neg(const Bits& a) {
  Bits inv(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) inv[i] = -a[i];
  return add(inv, Bits(a.size(), kFalse), kTrue);
}

BitBlaster::Bits BitBlaster::mul(const Bits& a, const Bits& b) {
  const std::size_t w = a.size();
  Bits acc(w, kFalse);
  for (std::size_t i = 0; i < w; ++i) {
    if (b[i] == kFalse) continue;
    Bits partial(w, kFalse);
    for (std::size_t j = 0; i + j < w; ++j) partial[i + j] = mk_and(a[j], b[i]);
    acc = add(acc, partial, kFalse);
  }
  return acc;
}

void BitBlaster::divmod(const Bits& a, const Bits& b, Bits& quot, Bits& rem) {
  // Restoring division over a w+1 bit remainder. A zero divisor yields an
  // all-ones quotient and the dividend as remainder, matching SMT-LIB.
  const std::size_t w = a.size();
  Bits divisor = b;
  divisor.push_back(kFalse);
  Bits neg_divisor(w + 1);
  for (std::size_t i = 0; i <= w; ++i) neg_divisor[i] = -divisor[i];
  Bits r(w + 1, kFalse);
  quot.assign(w, kFalse);
  for (std::size_t step = w; step-- > 0;) {
    Bits shifted(w + 1);
    shifted[0] = a[step];
    for (std::size_t i = 1; i <= w; ++i) shifted[i] = r[i - 1];
    int no_borrow = kFalse;
    Bits diff = add(shifted, neg_divisor, kTrue, &no_borrow);
    // no_borrow set means shifted >= divisor
    quot[step] = no_borrow;
    r = mux(no_borrow, diff, shifted);
  }
  rem.assign(r.begin(), r.begin() + static_cast<std::ptrdiff_t>(w));
}

BitBlaster::Bits BitBlaster::shift(const Bits& a, const Bits& amount, Op op) {
  const std::size_t w = a.size();
  int fill = op == Op::BvAshr ? a.back() : kFalse;
  Bits cur = a;
  std::vector<int> overflow;
  for (std::size_t k = 0; k < amount.size(); ++k) {
    if (k >= 63 || (std::size_t{1} << k) >= w) {
      overflow.push_back(amount[k]);
      continue;
    }
    std::size_t dist = std::size_t{1} << k;
    Bits moved(w);
    for (std::size_t i = 0; i < w; ++i) {
      if (op == Op::BvShl) moved[i] = i >= dist ? cur[i - dist] : kFalse;
      else moved[i] = i + dist < w ? cur[i + dist] : fill;
    }
    cur = mux(amount[k], moved, cur);
  }
  int over = mk_or_n(overflow);
  return mux(over, Bits(w, fill), cur);
}

int BitBlaster::ult(const Bits& a, const Bits& b) {
  Bits inv(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) inv[i] = -b[i];
  int no_borrow = kFalse;
  add(a, inv, kTrue, &no_borrow);
  return -no_borrow;
}

int BitBlaster::slt(const Bits& a, const Bits& b) {
  Bits x = a, y = b;
  x.back() = -x.back();
  y.back() = -y.back();
  return ult(x, y);
}

int BitBlaster::equal(const Bits& a, const Bits& b) {
  std::vector<int> eqs;
  eqs.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) eqs.push_back(-mk_xor(a[i], b[i]));
  return mk_and_n(std::move(eqs));
}

BitBlaster::Bits BitBlaster::mux(int c, const Bits& t, const Bits& e) {
  Bits out(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) out[i] = mk_ite(c, t[i], e[i]);
  return out;
}

const std::vector<int>& BitBlaster::bits(TermId t) {
  if (t >= cached_.size()) {
    cached_.resize(store_.size(), 0);
    cache_.resize(store_.size());
  }
  if (cached_[t]) return cache_[t];
  std::vector<TermId> stack{t};
  while (!stack.empty()) {
    TermId cur = stack.back();
    if (cached_[cur]) {
      stack.pop_back();
      continue;
    }
    bool ready = true;
    for (TermId c : store_[cur].children)
      if (!cached_[c]) {
        stack.push_back(c);
        ready = false;
      }
    if (!ready) continue;
    stack.pop_back();
    encode(cur);
    cached_[cur] = 1;
  }
  return cache_[t];
}

void BitBlaster::encode(TermId t) {
  const Node& n = store_[t];
  const auto& ch = n.children;
  auto b = [this](TermId c) -> const Bits& { return cache_[c]; };
  auto one = [](int l) { return Bits{l}; };
  Bits out;
  switch (n.op) {
    case Op::Var:
      if (!n.sort.is_scalar())
        throw std::logic_error("array variable reached the bit-blaster");
      out = map_.symbol_bits[n.param0];
      break;
    case Op::Const:
      out.resize(n.value.width());
      for (std::uint32_t i = 0; i < n.value.width(); ++i)
        out[i] = n.value.bit(i) ? kTrue : kFalse;
      break;
    case Op::BvAdd:
      out = b(ch[0]);
      for (std::size_t i = 1; i < ch.size(); ++i) out = add(out, b(ch[i]), kFalse);
      break;
    case Op::BvSub: {
      Bits inv(b(ch[1]).size());
      for (std::size_t i = 0; i < inv.size(); ++i) inv[i] = -b(ch[1])[i];
      out = add(b(ch[0]), inv, kTrue);
      break;
    }
    case Op::BvMul:
      out = b(ch[0]);
      for (std::size_t i = 1; i < ch.size(); ++i) out = mul(out, b(ch[i]));
      break;
    case Op::BvUdiv:
    case Op::BvUrem: {
      Bits q, r;
      divmod(b(ch[0]), b(ch[1]), q, r);
      out = n.op == Op::BvUdiv ? q : r;
      break;
    }
    case Op::BvAnd:
    case Op::BvOr:
    case Op::BvXor:
      out = b(ch[0]);
      for (std::size_t i = 1; i < ch.size(); ++i)
        for (std::size_t k = 0; k < out.size(); ++k) {
          int y = b(ch[i])[k];
          out[k] = n.op == Op::BvAnd  ? mk_and(out[k], y)
                   : n.op == Op::BvOr ? mk_or(out[k], y)
                                      : mk_xor(out[k], y);
        }
      break;
    case Op::BvNot:
      out = b(ch[0]);
      for (int& l : out) l = -l;
      break;
    case Op::BvNeg:
      out = neg(b(ch[0]));
      break;
    case Op::BvShl:
    case Op::BvLshr:
    case Op::BvAshr:
      out = shift(b(ch[0]), b(ch[1]), n.op);
      break;
    case Op::BvUlt: out = one(ult(b(ch[0]), b(ch[1]))); break;
    case Op::BvUle: out = one(-ult(b(ch[1]), b(ch[0]))); break;
    case Op::BvUgt: out = one(ult(b(ch[1]), b(ch[0]))); break;
    case Op::BvUge: out = one(-ult(b(ch[0]), b(ch[1]))); break;
    case Op::BvSlt: out = one(slt(b(ch[0]), b(ch[1]))); break;
    case Op::BvSle: out = one(-slt(b(ch[1]), b(ch[0]))); break;
    case Op::BvSgt: out = one(slt(b(ch[1]), b(ch[0]))); break;
    case Op::BvSge: out = one(-slt(b(ch[0]), b(ch[1]))); break;
    case Op::Concat:
      out = b(ch[1]);
      out.insert(out.end(), b(ch[0]).begin(), b(ch[0]).end());
      break;
    case Op::Extract:
      out.assign(b(ch[0]).begin() + n.param1, b(ch[0]).begin() + n.param0 + 1);
      break;
    case Op::ZeroExtend:
      out = b(ch[0]);
      out.resize(out.size() + n.param0, kFalse);
      break;
    case Op::SignExtend:
      out = b(ch[0]);
      out.resize(out.size() + n.param0, out.back());
      break;
    case Op::Ite:
      if (!n.sort.is_scalar())
        throw std::logic_error("array ite reached the bit-blaster");
      out = mux(b(ch[0])[0], b(ch[1]), b(ch[2]));
      break;
    case Op::Eq: {
      if (!store_[ch[0]].sort.is_scalar())
        throw std::logic_error("array equality reached the bit-blaster");
      std::vector<int> eqs;
      for (std::size_t i = 1; i < ch.size(); ++i)
        eqs.push_back(equal(b(ch[0]), b(ch[i])));
      out = one(mk_and_n(std::move(eqs)));
      break;
    }
    case Op::Distinct: {
      if (!store_[ch[0]].sort.is_scalar())
        throw std::logic_error("array distinct reached the bit-blaster");
      std::vector<int> neqs;
      for (std::size_t i = 0; i < ch.size(); ++i)
        for (std::size_t j = i + 1; j < ch.size(); ++j)
          neqs.push_back(-equal(b(ch[i]), b(ch[j])));
      out = one(mk_and_n(std::move(neqs)));
      break;
    }
    case Op::And:
    case Op::Or: {
      std::vector<int> lits;
      for (TermId c : ch) lits.push_back(b(c)[0]);
      out = one(n.op == Op::And ? mk_and_n(std::move(lits))
                                : mk_or_n(std::move(lits)));
      break;
    }
    case Op::Xor: {
      int acc = b(ch[0])[0];
      for (std::size_t i = 1; i < ch.size(); ++i) acc = mk_xor(acc, b(ch[i])[0]);
      out = one(acc);
      break;
    }
    case Op::Not: out = one(-b(ch[0])[0]); break;
    case Op::Implies: out = one(mk_or(-b(ch[0])[0], b(ch[1])[0])); break;
    case Op::Select:
    case Op::Store:
    case Op::Apply:
      throw std::logic_error(std::string("theory operator '") +
                             std::string(op_name(n.op)) +
                             "' reached the bit-blaster");
  }
  if (n.sort.is_scalar() && out.size() != n.sort.width())
    throw std::logic_error("width mismatch while bit-blasting");
  cache_[t] = std::move(out);
}

void BitBlaster::assert_term(TermId t) {
  const Node& n = store_[t];
  if (!n.sort.is_bool()) throw std::logic_error("asserted term is not Bool");
  if (n.op == Op::And) {
    for (TermId c : n.children) assert_term(c);
    return;
  }
  if (n.op == Op::Or) {
    std::vector<int> clause;
    for (TermId c : n.children) clause.push_back(bits(c)[0]);
    emit(std::move(clause));
    return;
  }
  emit({bits(t)[0]});
}

std::pair<Cnf, BlastMap> bit_blast(const Abstraction& abs,
                                   std::span<const TermId> lemmas) {
  BitBlaster blaster(abs.abstracted());
  for (TermId a : abs.abstracted().assertions()) blaster.assert_term(a);
  for (TermId l : lemmas) blaster.assert_term(l);
  return {blaster.cnf(), blaster.map()};
}

Assignment lift_model(const Formula& f, const BlastMap& map, const Model& model) {
  Assignment a = Assignment::zeros(f);
  for (SymbolId s = 0; s < f.symbols().size(); ++s) {
    const Sort& sort = f.symbol(s).sort;
    if (!sort.is_scalar()) continue;
    if (s >= map.symbol_bits.size() || map.symbol_bits[s].size() != sort.width())
      throw std::invalid_argument("blast map does not cover symbol '" +
                                  f.symbol(s).name + "'");
    BitVector v(sort.width());
    for (std::uint32_t i = 0; i < sort.width(); ++i) {
      int var = map.symbol_bits[s][i];
      if (static_cast<std::size_t>(var) > model.size())
        throw std::invalid_argument("SAT model leaves a tracked bit unassigned");
      v.set_bit(i, model[static_cast<std::size_t>(var) - 1]);
    }
    a.set_scalar(s, std::move(v));
  }
  return a;
}

}  // namespace pansampler
