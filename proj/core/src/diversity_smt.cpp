#include "pansampler/diversity_smt.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>

#include "pansampler/evaluator.hpp"
#include "pansampler/theory.hpp"

namespace pansampler {

BitDistribution distribution_from(std::span<const Assignment> history,
                                  const BlastMap& map) {
  BitDistribution dist;
  for (SymbolId s = 0; s < map.symbol_bits.size(); ++s) {
    const auto& vars = map.symbol_bits[s];
    for (std::uint32_t i = 0; i < vars.size(); ++i) {
      PhaseCounts counts;
      for (const Assignment& a : history) {
        if (a.scalar(s).bit(i)) ++counts.count1;
        else ++counts.count0;
      }
      if (!history.empty()) dist.emplace(vars[i], counts);
    }
  }
  return dist;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

DiversitySmt::DiversitySmt(const Formula& f)
    : f_(f), abs_(f), base_(abs_.abstracted()),
      lemma_bound_(axiom_instance_bound(f, abs_)) {
  for (TermId a : abs_.abstracted().assertions()) base_.assert_term(a);
}

TermId DiversitySmt::deviation(SymbolId v, const BitVector& value) {
  TermStore& store = abs_.terms();
  const Symbol& sym = abs_.abstracted().symbol(v);
  TermId c = store.mk_const(value, sym.sort.is_bool());
  return store.mk_not(store.mk_eq(sym.term, c));
}

SmtResult DiversitySmt::solve(const BitDistribution& dist, const SmtOptions& opt,
                              std::span<const TermId> extra,
                              std::span<const Assignment> blocked) {
  SmtResult result;
  for (std::size_t round = 0;; ++round) {
    std::optional<BitBlaster> local;
    if (!extra.empty() || !blocked.empty()) {
      local.emplace(base_);
      for (TermId t : extra) local->assert_term(t);
      const BlastMap& map = base_.map();
      for (const Assignment& b : blocked) {
        std::vector<int> clause;
        for (SymbolId s = 0; s < map.symbol_bits.size(); ++s)
          for (std::uint32_t i = 0; i < map.symbol_bits[s].size(); ++i)
            clause.push_back(b.scalar(s).bit(i) ? -map.symbol_bits[s][i]
                                                : map.symbol_bits[s][i]);
        local->add_clause(std::move(clause));
      }
    }
    const Cnf& cnf = local ? local->cnf() : base_.cnf();
    SolverConfig cfg = opt.sat;
    cfg.seed = derive_seed(opt.sat.seed, round);
    SatResult sat = pansampler::solve(cnf, dist, cfg);
    if (sat.status == SatStatus::Unsat) {
      result.status = SmtStatus::Unsat;
      return result;
    }
    if (sat.status == SatStatus::Aborted) {
      result.status = SmtStatus::Aborted;
      return result;
    }
    Assignment candidate = lift_model(abs_.abstracted(), base_.map(), sat.model);

    TheoryVerdict arrays = check_arrays(f_, abs_, candidate, opt.all_violations);
    TheoryVerdict funs;
    if (arrays.consistent())
      funs = check_functions(f_, abs_, candidate, opt.all_violations);
    const auto& fresh = arrays.consistent() ? funs.lemmas : arrays.lemmas;
    if (!fresh.empty()) {
      Evaluator ev(abs_.terms(), candidate);
      for (TermId l : fresh) {
        if (ev.truth(l))
          throw std::logic_error("theory lemma holds under the rejected model");
        lemmas_.push_back(l);
        base_.assert_term(l);
      }
      result.lemma_rounds = round + 1;
      max_rounds_ = std::max(max_rounds_, result.lemma_rounds);
      if (lemmas_.size() > lemma_bound_)
        throw std::logic_error("lemma loop exceeded the axiom-instance bound");
      continue;
    }

    Assignment full = std::move(arrays.completed);
    for (SymbolId s : f_.function_symbols()) full[s] = funs.completed[s];
    if (!satisfies(f_, full))
      throw std::logic_error("theory-consistent model does not satisfy the formula");
    result.status = SmtStatus::Sat;
    result.solution = std::move(full);
    result.abstraction = std::move(candidate);
    return result;
  }
}

SmtResult diversity_smt(const Formula& f, std::span<const Assignment> history,
                        const SolverConfig& cfg) {
  DiversitySmt smt(f);
  std::vector<Assignment> projected;
  projected.reserve(history.size());
  for (const Assignment& a : history) projected.push_back(smt.project(a));
  SmtOptions opt;
  opt.sat = cfg;
  return smt.solve(smt.distribution(projected), opt);
}

}  // namespace pansampler
