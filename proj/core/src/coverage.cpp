#include "pansampler/coverage.hpp"

#include <stdexcept>

#include "pansampler/evaluator.hpp"

namespace pansampler {

AstBitUniverse build_universe(const Formula& f) {
  AstBitUniverse u;
  const TermStore& ts = f.terms();
  for (TermId t : reachable_terms(f)) {
    const Node& n = ts[t];
    if (n.op == Op::Const || !n.sort.is_scalar()) continue;
    u.nodes.push_back(t);
    for (std::uint32_t b = 0; b < n.sort.width(); ++b) u.entries.push_back({t, b});
  }
  return u;
}

SlotSet cover_set(const Formula& f, const AstBitUniverse& u,
                  const Assignment& a) {
  SlotSet slots(u.slot_count());
  Evaluator ev(f, a);
  std::size_t k = 0;
  for (TermId t : u.nodes) {
    const BitVector& v = ev.scalar(t);
    for (std::uint32_t b = 0; b < v.width(); ++b, ++k)
      slots.set(2 * k + (v.bit(b) ? 1 : 0));
  }
  return slots;
}

void CoverState::absorb(const SlotSet& slots) {
  if (slots.size() != covered_.size())
    throw std::invalid_argument("cover set size does not match the universe");
  covered_ |= slots;
  ++num_solutions_;
}

double coverage_star(const CoverState& c, const AstBitUniverse& u) {
  if (c.num_solutions() == 0) return 0.0;
  if (u.slot_count() == 0) return 1.0;
  return static_cast<double>(c.covered_count()) /
         static_cast<double>(u.slot_count());
}

std::size_t ast_score(const CoverState& c, const SlotSet& slots) {
  return (slots - c.covered()).count();
}

std::size_t ast_score(const Formula& f, const AstBitUniverse& u,
                      const CoverState& c, const Assignment& a) {
  return ast_score(c, cover_set(f, u, a));
}

std::size_t manhattan_score(const Formula& f,
                            std::span<const Assignment> history,
                            const Assignment& a) {
  std::size_t total = 0;
  std::vector<SymbolId> scalars = f.scalar_symbols();
  for (const Assignment& beta : history)
    for (SymbolId s : scalars) total += a.scalar(s).hamming(beta.scalar(s));
  return total;
}

nlohmann::json coverage_report(const CoverState& c, const AstBitUniverse& u) {
  return {
      {"covered_slots", c.covered_count()},
      {"total_slots", u.slot_count()},
      {"coverage_star", coverage_star(c, u)},
      {"num_solutions", c.num_solutions()},
  };
}

}  // namespace pansampler
