#include "pansampler/sampler.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "pansampler/evaluator.hpp"

namespace pansampler {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

}  // namespace

std::string_view mode_name(Mode m) {
  switch (m) {
    case Mode::PanSampler: return "pansampler";
    case Mode::Alt1: return "alt1";
    case Mode::Alt2: return "alt2";
    case Mode::Alt3: return "alt3";
  }
  return "?";
}

std::optional<Mode> parse_mode(std::string_view name) {
  for (Mode m : {Mode::PanSampler, Mode::Alt1, Mode::Alt2, Mode::Alt3})
    if (mode_name(m) == name) return m;
  return std::nullopt;
}

std::string_view reason_name(StopReason r) {
  switch (r) {
    case StopReason::Target: return "target";
    case StopReason::MaxSolutions: return "max_solutions";
    case StopReason::Timeout: return "timeout";
    case StopReason::Stall: return "stall";
    case StopReason::Unsat: return "unsat";
    case StopReason::Error: return "error";
  }
  return "?";
}

void SamplerConfig::validate() const {
  if (lambda < 1) throw std::invalid_argument("lambda must be at least 1");
  if (!(target_coverage > 0.0 && target_coverage <= 1.0))
    throw std::invalid_argument("target coverage must lie in (0, 1]");
  if (max_solutions < 1) throw std::invalid_argument("max solutions must be positive");
  if (!(time_budget > 0.0)) throw std::invalid_argument("time budget must be positive");
  if (!(bias_p >= 0.5 && bias_p <= 1.0))
    throw std::invalid_argument("bias probability must lie in [0.5, 1]");
}

Sampler::Sampler(const Formula& f, SamplerConfig cfg)
    : f_(f), cfg_(std::move(cfg)), universe_(build_universe(f)), smt_(f) {
  cfg_.validate();
}

SmtOptions Sampler::options(std::uint64_t seed) const {
  SmtOptions opt;
  opt.sat.seed = seed;
  opt.sat.bias_p = cfg_.bias_p;
  opt.sat.bias_mode = cfg_.bias_mode;
  opt.sat.conflict_budget = cfg_.conflict_budget;
  opt.sat.deadline = deadline_;
  return opt;
}

std::size_t Sampler::score(const CoverState& c,
                           std::span<const Assignment> solutions,
                           const Assignment& a) const {
  if (cfg_.mode == Mode::Alt2) return manhattan_score(f_, solutions, a);
  return ast_score(f_, universe_, c, a);
}

Assignment Sampler::post_opt(const CoverState& c,
                             std::span<const Assignment> solutions,
                             std::span<const Assignment> abstract_history,
                             const Assignment& alpha) {
  const bool blocking = cfg_.mode == Mode::Alt1;
  BitDistribution dist;
  if (!blocking) dist = smt_.distribution(abstract_history);
  Assignment best = alpha;
  std::size_t best_score = score(c, solutions, alpha);
  const std::uint64_t base = derive_seed(cfg_.seed, 0x9057'0000 + c.num_solutions());
  for (SymbolId v : f_.scalar_symbols()) {
    TermId away = smt_.deviation(v, alpha.scalar(v));
    std::span<const Assignment> blocked;
    if (blocking) blocked = abstract_history;
    SmtResult r = smt_.solve(dist, options(derive_seed(base, v)), {&away, 1}, blocked);
    if (r.status == SmtStatus::Aborted) break;
    if (r.status != SmtStatus::Sat) continue;
    std::size_t s = score(c, solutions, r.solution);
    if (s > best_score) {
      best_score = s;
      best = std::move(r.solution);
    }
  }
  return best;
}

SampleResult Sampler::run() {
  const auto start = Clock::now();
  deadline_ = start + std::chrono::duration_cast<Clock::duration>(
                          std::chrono::duration<double>(cfg_.time_budget));
  SampleResult result;
  result.total_slots = universe_.slot_count();
  result.lemma_bound = smt_.lemma_bound();
  CoverState state(universe_);
  std::vector<Assignment> history;  // abstraction level
  const bool blocking = cfg_.mode == Mode::Alt1;

  auto reached = [&] {
    if (state.num_solutions() == 0) return false;
    if (!cfg_.coverage_denominator) return coverage_star(state, universe_) >= cfg_.target_coverage;
    std::size_t den = *cfg_.coverage_denominator;
    if (den == 0) return true;
    return static_cast<double>(state.covered_count()) / static_cast<double>(den) >=
           cfg_.target_coverage;
  };
  auto finish = [&](StopReason reason) {
    result.reason = reason;
    result.achieved = reached();
    result.covered_slots = state.covered_count();
    result.wall_time = seconds_since(start);
    result.lemmas = smt_.lemmas().size();
    result.max_lemma_rounds = smt_.max_rounds();
    return result;
  };

  std::size_t stall = 0;
  while (true) {
    if (reached()) return finish(StopReason::Target);
    if (result.solutions.size() >= cfg_.max_solutions)
      return finish(StopReason::MaxSolutions);
    if (Clock::now() >= *deadline_) return finish(StopReason::Timeout);
    ++result.iterations;

    auto t0 = Clock::now();
    BitDistribution dist;
    if (!blocking) dist = smt_.distribution(history);
    std::span<const Assignment> blocked;
    if (blocking) blocked = history;
    std::vector<Assignment> candidates;
    bool aborted = false, exhausted = false;
    const std::uint64_t iter_seed = derive_seed(cfg_.seed, result.iterations);
    for (std::size_t j = 0; j < cfg_.lambda; ++j) {
      SmtResult r = smt_.solve(dist, options(derive_seed(iter_seed, j)), {}, blocked);
      if (r.status == SmtStatus::Aborted) {
        aborted = true;
        break;
      }
      if (r.status == SmtStatus::Unsat) {
        exhausted = true;
        break;
      }
      candidates.push_back(std::move(r.solution));
    }
    result.times.sampling += seconds_since(t0);
    if (candidates.empty()) {
      if (exhausted) return finish(result.solutions.empty() ? StopReason::Unsat
                                                            : StopReason::Stall);
      if (Clock::now() >= *deadline_) return finish(StopReason::Timeout);
      result.error = aborted ? "conflict budget exhausted" : "no candidate";
      return finish(StopReason::Error);
    }

    t0 = Clock::now();
    std::vector<std::size_t> scores;
    scores.reserve(candidates.size());
    for (const Assignment& a : candidates)
      scores.push_back(score(state, result.solutions, a));
    std::size_t chosen = 0;
    for (std::size_t j = 1; j < scores.size(); ++j)
      if (scores[j] > scores[chosen]) chosen = j;
    result.times.evaluation += seconds_since(t0);
    if (cfg_.on_candidates)
      cfg_.on_candidates({result.iterations, candidates, scores, state, chosen});

    Assignment alpha = std::move(candidates[chosen]);
    if (cfg_.mode != Mode::Alt3) {
      t0 = Clock::now();
      alpha = post_opt(state, result.solutions, history, alpha);
      result.times.optimization += seconds_since(t0);
    }
    if (!satisfies(f_, alpha))
      throw std::logic_error("sampler produced an assignment violating the formula");

    SlotSet slots = cover_set(f_, universe_, alpha);
    std::size_t gain = ast_score(state, slots);
    if (state.num_solutions() == 0 || gain > 0) {
      state.absorb(slots);
      history.push_back(smt_.project(alpha));
      result.solutions.push_back(std::move(alpha));
      result.coverage_star_trace.push_back(coverage_star(state, universe_));
      stall = 0;
    } else if (++stall >= cfg_.lambda) {
      return finish(StopReason::Stall);
    }
  }
}

SampleResult sample(const Formula& f, const SamplerConfig& cfg) {
  Sampler s(f, cfg);
  return s.run();
}

Assignment post_opt(const Formula& f, const AstBitUniverse& /*u*/,
                    const CoverState& c, std::span<const Assignment> solutions,
                    const Assignment& alpha, const SamplerConfig& cfg) {
  Sampler s(f, cfg);
  std::vector<Assignment> history;
  for (const Assignment& a : solutions) history.push_back(s.smt().project(a));
  return s.post_opt(c, solutions, history, alpha);
}

}  // namespace pansampler
