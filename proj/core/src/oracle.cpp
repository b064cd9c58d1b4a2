#include "pansampler/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <optional>

#include <boost/multiprecision/cpp_int.hpp>

namespace pansampler::oracle {

namespace {

using boost::multiprecision::cpp_int;

cpp_int pow2(unsigned w) { return cpp_int(1) << w; }
cpp_int mask(unsigned w) { return pow2(w) - 1; }

cpp_int to_int(const BitVector& v) {
  cpp_int r = 0;
  for (std::uint32_t i = v.width(); i-- > 0;) {
    r <<= 1;
    if (v.bit(i)) r |= 1;
  }
  return r;
}

BitVector from_int(const cpp_int& v, unsigned w) {
  BitVector out(w);
  for (unsigned i = 0; i < w; ++i) out.set_bit(i, bit_test(v, i));
  return out;
}

cpp_int to_signed(const cpp_int& v, unsigned w) {
  return bit_test(v, w - 1) ? v - pow2(w) : v;
}

struct SlowArray {
  unsigned index_width = 0;
  cpp_int fallback;
  std::map<cpp_int, cpp_int> cells;

  cpp_int read(const cpp_int& i) const {
    auto it = cells.find(i);
    return it == cells.end() ? fallback : it->second;
  }
};

bool same_array(const SlowArray& a, const SlowArray& b) {
  if (a.index_width <= 16) {
    for (cpp_int i = 0; i < pow2(a.index_width); ++i)
      if (a.read(i) != b.read(i)) return false;
    return true;
  }
  for (const auto& [k, v] : a.cells)
    if (v != b.read(k)) return false;
  for (const auto& [k, v] : b.cells)
    if (v != a.read(k)) return false;
  return a.fallback == b.fallback;
}

struct SlowValue {
  cpp_int bits;
  unsigned width = 1;
  std::shared_ptr<const SlowArray> array;
};

}  // namespace

struct SlowEvaluator::Impl {
  const Formula& f;
  const Assignment& a;
  std::map<TermId, SlowValue> memo;

  SlowValue eval(TermId t) {
    if (auto it = memo.find(t); it != memo.end()) return it->second;
    SlowValue v = compute(t);
    memo.emplace(t, v);
    return v;
  }

  static SlowValue scalar(cpp_int bits, unsigned w) { return {std::move(bits), w, nullptr}; }
  static SlowValue boolean(bool b) { return {cpp_int(b ? 1 : 0), 1, nullptr}; }

  bool equal(const SlowValue& x, const SlowValue& y) {
    if (x.array) return same_array(*x.array, *y.array);
    return x.bits == y.bits;
  }

  SlowValue compute(TermId t) {
    const Node& n = f.terms()[t];
    const unsigned w = n.sort.is_scalar() ? n.sort.width() : 0;
    auto arg = [&](std::size_t i) { return eval(n.children[i]); };
    auto num = [&](std::size_t i) { return eval(n.children[i]).bits; };
    switch (n.op) {
      case Op::Var: {
        const Value& val = a[n.param0];
        if (n.sort.is_scalar()) return scalar(to_int(std::get<BitVector>(val)), w);
        const auto& av = std::get<ArrayValue>(val);
        auto arr = std::make_shared<SlowArray>();
        arr->index_width = n.sort.index().width();
        arr->fallback = to_int(av.default_value);
        for (const auto& [k, x] : av.overrides) arr->cells[to_int(k)] = to_int(x);
        return {0, 0, arr};
      }
      case Op::Const:
        return scalar(to_int(n.value), w);
      case Op::BvAdd: {
        cpp_int s = 0;
        for (std::size_t i = 0; i < n.children.size(); ++i) s += num(i);
        return scalar(s % pow2(w), w);
      }
      case Op::BvMul: {
        cpp_int s = 1;
        for (std::size_t i = 0; i < n.children.size(); ++i) s = (s * num(i)) % pow2(w);
        return scalar(s, w);
      }
      case Op::BvSub:
        return scalar((num(0) + pow2(w) - num(1)) % pow2(w), w);
      case Op::BvUdiv: {
        cpp_int d = num(1);
        return scalar(d == 0 ? mask(w) : cpp_int(num(0) / d), w);
      }
      case Op::BvUrem: {
        cpp_int d = num(1);
        return scalar(d == 0 ? num(0) : cpp_int(num(0) % d), w);
      }
      case Op::BvAnd:
      case Op::BvOr:
      case Op::BvXor: {
        cpp_int s = num(0);
        for (std::size_t i = 1; i < n.children.size(); ++i) {
          if (n.op == Op::BvAnd) s &= num(i);
          else if (n.op == Op::BvOr) s |= num(i);
          else s ^= num(i);
        }
        return scalar(s, w);
      }
      case Op::BvNot:
        return scalar(mask(w) ^ num(0), w);
      case Op::BvNeg:
        return scalar((pow2(w) - num(0)) % pow2(w), w);
      case Op::BvShl:
      case Op::BvLshr:
      case Op::BvAshr: {
        cpp_int x = num(0), s = num(1);
        bool sign = bit_test(x, w - 1);
        if (s >= w) {
          return scalar(n.op == Op::BvAshr && sign ? mask(w) : cpp_int(0), w);
        }
        unsigned k = s.convert_to<unsigned>();
        if (n.op == Op::BvShl) return scalar((x << k) & mask(w), w);
        cpp_int r = x >> k;
        if (n.op == Op::BvAshr && sign) r |= mask(w) ^ (mask(w) >> k);
        return scalar(r, w);
      }
      case Op::BvUlt: return boolean(num(0) < num(1));
      case Op::BvUle: return boolean(num(0) <= num(1));
      case Op::BvUgt: return boolean(num(0) > num(1));
      case Op::BvUge: return boolean(num(0) >= num(1));
      case Op::BvSlt:
      case Op::BvSle:
      case Op::BvSgt:
      case Op::BvSge: {
        unsigned cw = f.terms()[n.children[0]].sort.width();
        cpp_int x = to_signed(num(0), cw), y = to_signed(num(1), cw);
        bool r = n.op == Op::BvSlt   ? x < y
                 : n.op == Op::BvSle ? x <= y
                 : n.op == Op::BvSgt ? x > y
                                     : x >= y;
        return boolean(r);
      }
      case Op::Concat: {
        SlowValue hi = arg(0), lo = arg(1);
        return scalar((hi.bits << lo.width) | lo.bits, w);
      }
      case Op::Extract:
        return scalar((num(0) >> n.param1) & mask(w), w);
      case Op::ZeroExtend:
        return scalar(num(0), w);
      case Op::SignExtend: {
        SlowValue x = arg(0);
        cpp_int r = x.bits;
        if (bit_test(r, x.width - 1)) r |= mask(w) ^ mask(x.width);
        return scalar(r, w);
      }
      case Op::Ite:
        return eval(n.children[0]).bits != 0 ? arg(1) : arg(2);
      case Op::Eq: {
        SlowValue first = arg(0);
        for (std::size_t i = 1; i < n.children.size(); ++i)
          if (!equal(first, arg(i))) return boolean(false);
        return boolean(true);
      }
      case Op::Distinct: {
        for (std::size_t i = 0; i < n.children.size(); ++i)
          for (std::size_t j = i + 1; j < n.children.size(); ++j)
            if (equal(arg(i), arg(j))) return boolean(false);
        return boolean(true);
      }
      case Op::And:
        for (std::size_t i = 0; i < n.children.size(); ++i)
          if (num(i) == 0) return boolean(false);
        return boolean(true);
      case Op::Or:
        for (std::size_t i = 0; i < n.children.size(); ++i)
          if (num(i) != 0) return boolean(true);
        return boolean(false);
      case Op::Xor: {
        bool r = false;
        for (std::size_t i = 0; i < n.children.size(); ++i) r ^= num(i) != 0;
        return boolean(r);
      }
      case Op::Not: return boolean(num(0) == 0);
      case Op::Implies: return boolean(num(0) == 0 || num(1) != 0);
      case Op::Select: {
        SlowValue arr = arg(0);
        return scalar(arr.array->read(num(1)), w);
      }
      case Op::Store: {
        SlowValue base = arg(0);
        auto arr = std::make_shared<SlowArray>(*base.array);
        arr->cells[num(1)] = num(2);
        return {0, 0, arr};
      }
      case Op::Apply: {
        const Sort& fs = f.symbol(n.param0).sort;
        std::vector<BitVector> args;
        for (std::size_t i = 0; i < n.children.size(); ++i)
          args.push_back(from_int(num(i), fs.domain()[i].width()));
        const auto& fun = std::get<FunValue>(a[n.param0]);
        auto it = fun.table.find(args);
        return scalar(to_int(it == fun.table.end() ? fun.default_value : it->second), w);
      }
    }
    return boolean(false);
  }
};

SlowEvaluator::SlowEvaluator(const Formula& f, const Assignment& a)
    : impl_(new Impl{f, a, {}}) {}

SlowEvaluator::~SlowEvaluator() { delete impl_; }

BitVector SlowEvaluator::scalar(TermId t) {
  SlowValue v = impl_->eval(t);
  return from_int(v.bits, v.width);
}

bool satisfies(const Formula& f, const Assignment& a) {
  SlowEvaluator ev(f, a);
  for (TermId t : f.assertions())
    if (!ev.truth(t)) return false;
  return true;
}

SlotSet cover_set(const Formula& f, const AstBitUniverse& u, const Assignment& a) {
  SlowEvaluator ev(f, a);
  SlotSet out(u.slot_count());
  std::map<TermId, BitVector> values;
  for (std::size_t k = 0; k < u.entries.size(); ++k) {
    const AstBitEntry& e = u.entries[k];
    auto it = values.find(e.node);
    if (it == values.end()) it = values.emplace(e.node, ev.scalar(e.node)).first;
    out.set(2 * k + (it->second.bit(e.bit) ? 1 : 0));
  }
  return out;
}

namespace {

// Bits per symbol when enumerating complete tables; nullopt above the cap.
std::optional<std::size_t> symbol_bits(const Sort& s, std::size_t cap) {
  auto cells = [cap](std::size_t width) -> std::optional<std::size_t> {
    if (width >= 32 || (std::size_t{1} << width) > cap) return std::nullopt;
    return std::size_t{1} << width;
  };
  if (s.is_scalar()) return s.width();
  if (s.is_array()) {
    auto c = cells(s.index().width());
    if (!c) return std::nullopt;
    return *c * s.element().width();
  }
  std::size_t tuples = 1;
  for (const Sort& d : s.domain()) {
    auto c = cells(d.width());
    if (!c || tuples * *c > cap) return std::nullopt;
    tuples *= *c;
  }
  return tuples * s.range().width();
}

}  // namespace

std::size_t domain_bits(const Formula& f) {
  constexpr std::size_t kHuge = std::size_t{1} << 40;
  std::size_t total = 0;
  for (const Symbol& s : f.symbols()) {
    auto b = symbol_bits(s.sort, 64);
    if (!b) return kHuge;
    total += *b;
  }
  return total;
}

EnumerationReport enumerate_solutions(const Formula& f, std::size_t domain_bit_cap) {
  EnumerationReport report;
  report.domain_bits = domain_bits(f);
  if (report.domain_bits > domain_bit_cap || report.domain_bits >= 63)
    throw CapExceeded("enumeration domain has " + std::to_string(report.domain_bits) +
                      " bits, cap is " + std::to_string(domain_bit_cap));
  report.universe = build_universe(f);
  report.valid = SlotSet(report.universe.slot_count());

  const std::uint64_t total = std::uint64_t{1} << report.domain_bits;
  for (std::uint64_t code = 0; code < total; ++code) {
    std::size_t pos = 0;
    auto take = [&](unsigned w) {
      BitVector v(w);
      for (unsigned i = 0; i < w; ++i) v.set_bit(i, (code >> pos++) & 1U);
      return v;
    };
    Assignment a = Assignment::zeros(f);
    for (SymbolId s = 0; s < f.symbols().size(); ++s) {
      const Sort& sort = f.symbol(s).sort;
      if (sort.is_scalar()) {
        a.set_scalar(s, take(sort.width()));
      } else if (sort.is_array()) {
        ArrayValue arr{BitVector(sort.element().width()), {}};
        const unsigned iw = sort.index().width();
        for (std::uint64_t i = 0; i < (std::uint64_t{1} << iw); ++i) {
          BitVector cell = take(sort.element().width());
          if (!cell.is_zero()) arr.overrides.emplace(BitVector::from_u64(iw, i), cell);
        }
        a[s] = std::move(arr);
      } else {
        FunValue fun{BitVector(sort.range().width()), {}};
        std::uint64_t tuples = 1;
        for (const Sort& d : sort.domain()) tuples <<= d.width();
        for (std::uint64_t t = 0; t < tuples; ++t) {
          std::vector<BitVector> args;
          std::uint64_t rest = t;
          for (const Sort& d : sort.domain()) {
            args.push_back(BitVector::from_u64(d.width(), rest & ((1ULL << d.width()) - 1)));
            rest >>= d.width();
          }
          BitVector out = take(sort.range().width());
          if (!out.is_zero()) fun.table.emplace(std::move(args), out);
        }
        a[s] = std::move(fun);
      }
    }
    if (!oracle::satisfies(f, a)) continue;
    SlotSet cover = oracle::cover_set(f, report.universe, a);
    report.valid |= cover;
    report.covers.push_back(std::move(cover));
    report.solutions.push_back(std::move(a));
  }
  report.valid_bits = report.valid.count();
  return report;
}

double exact_coverage(const Formula& f, const EnumerationReport& report,
                      std::span<const Assignment> A) {
  if (A.empty()) return 0.0;
  if (report.valid_bits == 0) return 1.0;
  SlotSet covered(report.universe.slot_count());
  for (const Assignment& a : A) covered |= oracle::cover_set(f, report.universe, a);
  covered &= report.valid;
  return static_cast<double>(covered.count()) / static_cast<double>(report.valid_bits);
}

double exact_score(const Formula& f, const EnumerationReport& report,
                   const SlotSet& covered, const Assignment& a) {
  if (report.valid_bits == 0) return 0.0;
  SlotSet fresh = oracle::cover_set(f, report.universe, a) - covered;
  return static_cast<double>(fresh.count()) / static_cast<double>(report.valid_bits);
}

namespace {

struct CoverSearch {
  std::vector<SlotSet> sets;
  std::size_t need = 0;
  std::size_t best = 0;
  std::vector<std::size_t> best_pick;
  std::vector<std::size_t> pick;
  std::uint64_t nodes = 0;
  std::uint64_t node_limit = 5'000'000;
  bool aborted = false;

  // Branches on the sets covering the rarest uncovered slot (full cover),
  // bounded by the incumbent.
  void full(const SlotSet& covered, const SlotSet& goal) {
    if (aborted) return;
    if (++nodes > node_limit) {
      aborted = true;
      return;
    }
    SlotSet missing = goal - covered;
    if (missing.none()) {
      if (pick.size() < best) {
        best = pick.size();
        best_pick = pick;
      }
      return;
    }
    if (pick.size() + 1 >= best) return;
    std::size_t max_gain = 0;
    for (const SlotSet& s : sets) max_gain = std::max(max_gain, (s & missing).count());
    if (max_gain == 0) return;
    std::size_t lower = (missing.count() + max_gain - 1) / max_gain;
    if (pick.size() + lower >= best) return;
    std::size_t slot = missing.find_first(), rarest = slot, rare_count = sets.size() + 1;
    for (; slot != SlotSet::npos; slot = missing.find_next(slot)) {
      std::size_t c = 0;
      for (const SlotSet& s : sets) c += s.test(slot);
      if (c < rare_count) {
        rare_count = c;
        rarest = slot;
      }
    }
    for (std::size_t i = 0; i < sets.size(); ++i) {
      if (!sets[i].test(rarest)) continue;
      pick.push_back(i);
      full(covered | sets[i], goal);
      pick.pop_back();
    }
  }

  // Combinations of increasing size for partial targets.
  bool partial(std::size_t k, std::size_t start, const SlotSet& covered) {
    if (++nodes > node_limit) {
      aborted = true;
      return false;
    }
    if (pick.size() == k) return covered.count() >= need;
    for (std::size_t i = start; i < sets.size(); ++i) {
      pick.push_back(i);
      if (partial(k, i + 1, covered | sets[i])) return true;
      pick.pop_back();
      if (aborted) return false;
    }
    return false;
  }
};

}  // namespace

MinCoverResult min_cover(const EnumerationReport& report, double r) {
  MinCoverResult result;
  const std::size_t total = report.valid_bits;
  if (r <= 0.0 || report.solutions.empty()) return result;
  std::size_t need = static_cast<std::size_t>(std::ceil(r * static_cast<double>(total) - 1e-9));
  need = std::max<std::size_t>(need, 1);  // a nonempty set is needed for positive r
  need = std::min(need, total);

  // Distinct, non-dominated cover sets with a representative solution each.
  std::vector<std::size_t> reps;
  for (std::size_t i = 0; i < report.covers.size(); ++i) {
    bool dup = false;
    for (std::size_t j : reps)
      if (report.covers[j] == report.covers[i]) dup = true;
    if (!dup) reps.push_back(i);
  }
  std::vector<std::size_t> kept;
  for (std::size_t i : reps) {
    bool dominated = false;
    for (std::size_t j : reps)
      if (i != j && report.covers[i].is_proper_subset_of(report.covers[j])) dominated = true;
    if (!dominated) kept.push_back(i);
  }

  CoverSearch search;
  for (std::size_t i : kept) search.sets.push_back(report.covers[i]);
  search.need = need;

  // Greedy incumbent.
  SlotSet covered(report.universe.slot_count());
  std::vector<std::size_t> greedy;
  while (covered.count() < need) {
    std::size_t best_i = 0, best_gain = 0;
    for (std::size_t i = 0; i < search.sets.size(); ++i) {
      std::size_t g = (search.sets[i] - covered).count();
      if (g > best_gain) {
        best_gain = g;
        best_i = i;
      }
    }
    if (best_gain == 0) break;
    covered |= search.sets[best_i];
    greedy.push_back(best_i);
  }

  auto finish = [&](const std::vector<std::size_t>& pick, bool exact) {
    result.exact = exact;
    result.cardinality = pick.size();
    for (std::size_t p : pick) result.chosen.push_back(kept[p]);
    return result;
  };

  if (total == 0) return finish({0}, true);
  if (need == total) {
    search.best = greedy.size();
    search.best_pick = greedy;
    search.full(SlotSet(report.universe.slot_count()), report.valid);
    return finish(search.best_pick, !search.aborted);
  }
  for (std::size_t k = 1; k < greedy.size(); ++k) {
    search.pick.clear();
    if (search.partial(k, 0, SlotSet(report.universe.slot_count())))
      return finish(search.pick, true);
    if (search.aborted) return finish(greedy, false);
  }
  return finish(greedy, true);
}

}  // namespace pansampler::oracle
