#include <gtest/gtest.h>

#include <algorithm>

#include "fuzz.hpp"
#include "pansampler/diversity_smt.hpp"
#include "pansampler/oracle.hpp"
#include "pansampler/sampler.hpp"
#include "test_util.hpp"

using namespace pansampler;
using pstest::with_scalars;

TEST(DiversitySmt, UniqueSolution) {
  Formula f = parse_formula("(declare-const x Bool)(assert x)");
  SmtResult r = diversity_smt(f, {}, SolverConfig{});
  ASSERT_EQ(r.status, SmtStatus::Sat);
  EXPECT_TRUE(r.solution.scalar(0).is_true());
}

TEST(DiversitySmt, BiasMovesAwayFromHistory) {
  Formula f = parse_formula("(declare-const x Bool)(assert (or x (not x)))");
  std::vector<Assignment> history{with_scalars(f, {{"x", 0}})};
  SolverConfig cfg;
  cfg.bias_p = 1.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    cfg.seed = seed;
    SmtResult r = diversity_smt(f, history, cfg);
    ASSERT_EQ(r.status, SmtStatus::Sat);
    EXPECT_TRUE(r.solution.scalar(0).is_true());
  }
}

TEST(DiversitySmt, ArrayFixtureWithinBound) {
  for (const char* name : {"abv_row.smt2", "abv_ext.smt2", "aufbv_mixed.smt2",
                           "ufbv_congruence.smt2"}) {
    Formula f = pstest::load_fixture(name);
    DiversitySmt smt(f);
    std::vector<Assignment> history;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      SmtOptions opt;
      opt.sat.seed = seed;
      SmtResult r = smt.solve(smt.distribution(history), opt);
      ASSERT_EQ(r.status, SmtStatus::Sat) << name;
      EXPECT_TRUE(oracle::satisfies(f, r.solution)) << name;
      EXPECT_LE(r.lemma_rounds, smt.lemma_bound()) << name;
      history.push_back(r.abstraction);
    }
    EXPECT_LE(smt.lemmas().size(), smt.lemma_bound()) << name;
  }
}

TEST(DiversitySmt, UnsatIsReported) {
  Formula f = pstest::load_fixture("suite/unsat.smt2");
  EXPECT_EQ(diversity_smt(f, {}, SolverConfig{}).status, SmtStatus::Unsat);
}

TEST(DiversitySmt, DeriveSeedIsStable) {
  EXPECT_EQ(derive_seed(1, 2), derive_seed(1, 2));
  EXPECT_NE(derive_seed(1, 2), derive_seed(1, 3));
  EXPECT_NE(derive_seed(1, 2), derive_seed(2, 2));
}

TEST(PostOpt, UniqueSolutionIsReturnedUnchanged) {
  Formula f = pstest::load_fixture("unique.smt2");
  AstBitUniverse u = build_universe(f);
  Assignment alpha = with_scalars(f, {{"m", 3}});
  CoverState c(u);
  c.absorb(cover_set(f, u, alpha));
  std::vector<Assignment> sols{alpha};
  EXPECT_EQ(post_opt(f, u, c, sols, alpha), alpha);
}

TEST(PostOpt, MatchesOracleBestDeviation) {
  Formula f = parse_formula(
      "(declare-const x (_ BitVec 2))(declare-const y (_ BitVec 2))(declare-const p Bool)"
      "(assert (= x y))(assert (=> p (= x #b11)))(assert (=> (not p) (bvult x #b10)))");
  AstBitUniverse u = build_universe(f);
  Assignment alpha = with_scalars(f, {{"x", 0}, {"y", 0}, {"p", 0}});
  ASSERT_TRUE(oracle::satisfies(f, alpha));
  CoverState c(u);
  c.absorb(cover_set(f, u, alpha));
  std::vector<Assignment> sols{alpha};

  // Oracle: best score over solutions that differ from alpha in one of the
  // deviated variables.
  oracle::EnumerationReport report = oracle::enumerate_solutions(f);
  std::size_t best = ast_score(f, u, c, alpha);
  for (SymbolId v : f.scalar_symbols())
    for (std::size_t k = 0; k < report.solutions.size(); ++k)
      if (report.solutions[k].scalar(v) != alpha.scalar(v))
        best = std::max(best, (report.covers[k] - c.covered()).count());
  ASSERT_GT(best, 0u);

  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    SamplerConfig cfg;
    cfg.seed = seed;
    Assignment out = post_opt(f, u, c, sols, alpha, cfg);
    EXPECT_TRUE(oracle::satisfies(f, out));
    EXPECT_EQ(ast_score(f, u, c, out), best);
  }
}

TEST(PostOpt, NeverWorsensScore) {
  pstest::FuzzOptions opt;
  for (const std::string& text : pstest::fuzz_corpus(61, 30, opt)) {
    Formula f = parse_formula(text);
    SmtResult first = diversity_smt(f, {}, SolverConfig{});
    if (first.status != SmtStatus::Sat) continue;
    AstBitUniverse u = build_universe(f);
    CoverState c(u);
    c.absorb(cover_set(f, u, first.solution));
    std::vector<Assignment> sols{first.solution};
    SolverConfig cfg;
    cfg.seed = 9;
    SmtResult second = diversity_smt(f, {}, cfg);
    Assignment out = post_opt(f, u, c, sols, second.solution);
    EXPECT_GE(ast_score(f, u, c, out), ast_score(f, u, c, second.solution));
    EXPECT_TRUE(oracle::satisfies(f, out));
  }
}

TEST(Sampler, ExcludedMiddleReachesValidBits) {
  Formula f = pstest::load_fixture("suite/xnotx.smt2");
  SamplerConfig cfg;
  cfg.target_coverage = 0.99;
  cfg.coverage_denominator = oracle::enumerate_solutions(f).valid_bits;
  SampleResult r = sample(f, cfg);
  EXPECT_TRUE(r.achieved);
  EXPECT_EQ(r.reason, StopReason::Target);
  EXPECT_EQ(r.solutions.size(), 2u);
  EXPECT_EQ(r.final_coverage(), 5.0 / 6.0);

  // Measured against all slots the root's false value never appears.
  cfg.coverage_denominator.reset();
  SampleResult star = sample(f, cfg);
  EXPECT_FALSE(star.achieved);
  EXPECT_EQ(star.reason, StopReason::Stall);
  EXPECT_EQ(star.solutions.size(), 2u);
}

TEST(Sampler, UnsatHasNoSolutions) {
  Formula f = pstest::load_fixture("suite/unsat.smt2");
  SampleResult r = sample(f, SamplerConfig{});
  EXPECT_EQ(r.reason, StopReason::Unsat);
  EXPECT_TRUE(r.solutions.empty());
  EXPECT_FALSE(r.achieved);
}

TEST(Sampler, UniqueSolutionStallsAtHalf) {
  Formula f = pstest::load_fixture("unique.smt2");
  SamplerConfig cfg;
  cfg.target_coverage = 0.99;
  cfg.lambda = 5;
  SampleResult r = sample(f, cfg);
  EXPECT_FALSE(r.achieved);
  EXPECT_EQ(r.reason, StopReason::Stall);
  EXPECT_EQ(r.solutions.size(), 1u);
  EXPECT_EQ(r.final_coverage(), 0.5);
}

TEST(Sampler, Rq7StallsAtReachableMaximum) {
  Formula f = pstest::load_fixture("suite/rq7.smt2");
  SamplerConfig cfg;
  cfg.lambda = 10;
  SampleResult r = sample(f, cfg);
  // 35 entries; the root is never false, so 69 of 70 slots are reachable.
  EXPECT_EQ(r.total_slots, 70u);
  EXPECT_EQ(r.covered_slots, 69u);
  EXPECT_EQ(r.reason, StopReason::Stall);
}

TEST(Sampler, TraceIsNondecreasingAndSolutionsValid) {
  for (auto logic : {pstest::FuzzLogic::BV, pstest::FuzzLogic::ABV, pstest::FuzzLogic::AUFBV}) {
    pstest::FuzzOptions opt;
    opt.logic = logic;
    for (const std::string& text : pstest::fuzz_corpus(71, 15, opt)) {
      Formula f = parse_formula(text);
      SamplerConfig cfg;
      cfg.lambda = 4;
      cfg.max_solutions = 20;
      SampleResult r = sample(f, cfg);
      ASSERT_NE(r.reason, StopReason::Error) << r.error << '\n' << text;
      ASSERT_EQ(r.coverage_star_trace.size(), r.solutions.size());
      EXPECT_TRUE(std::is_sorted(r.coverage_star_trace.begin(), r.coverage_star_trace.end()));
      for (const Assignment& a : r.solutions) EXPECT_TRUE(oracle::satisfies(f, a)) << text;
      EXPECT_EQ(r.achieved, r.reason == StopReason::Target);
    }
  }
}

TEST(Sampler, Deterministic) {
  Formula f = pstest::load_fixture("aufbv_mixed.smt2");
  SamplerConfig cfg;
  cfg.lambda = 6;
  cfg.seed = 42;
  SampleResult a = sample(f, cfg);
  SampleResult b = sample(f, cfg);
  EXPECT_EQ(a.solutions, b.solutions);
  EXPECT_EQ(a.coverage_star_trace, b.coverage_star_trace);
  EXPECT_EQ(a.iterations, b.iterations);
}

TEST(Sampler, AllModesProduceValidSamples) {
  Formula f = pstest::load_fixture("abv_row.smt2");
  for (Mode m : {Mode::PanSampler, Mode::Alt1, Mode::Alt2, Mode::Alt3}) {
    SamplerConfig cfg;
    cfg.mode = m;
    cfg.lambda = 5;
    cfg.max_solutions = 30;
    SampleResult r = sample(f, cfg);
    EXPECT_FALSE(r.solutions.empty()) << mode_name(m);
    for (const Assignment& a : r.solutions) EXPECT_TRUE(oracle::satisfies(f, a));
  }
}

TEST(Sampler, CandidateObserverSeesFirstArgmax) {
  Formula f = pstest::load_fixture("suite/rq7.smt2");
  SamplerConfig cfg;
  cfg.lambda = 7;
  std::size_t calls = 0;
  cfg.on_candidates = [&](const CandidateView& view) {
    ++calls;
    EXPECT_EQ(view.candidates.size(), 7u);
    auto it = std::max_element(view.scores.begin(), view.scores.end());
    EXPECT_EQ(view.chosen, static_cast<std::size_t>(it - view.scores.begin()));
  };
  SampleResult r = sample(f, cfg);
  EXPECT_EQ(calls, r.iterations);
}

// Alt3 with one candidate and no bias is plain repeated solving plus
// absorption.
TEST(Sampler, Alt3WithOneCandidateIsRepeatedSolving) {
  Formula f = pstest::load_fixture("ufbv_congruence.smt2");
  SamplerConfig cfg;
  cfg.mode = Mode::Alt3;
  cfg.lambda = 1;
  cfg.bias_p = 0.5;
  cfg.seed = 5;
  cfg.max_solutions = 25;
  SampleResult r = sample(f, cfg);

  AstBitUniverse u = build_universe(f);
  DiversitySmt smt(f);
  CoverState state(u);
  std::vector<Assignment> history;
  std::vector<double> trace;
  for (std::size_t it = 1; trace.size() < cfg.max_solutions; ++it) {
    SmtOptions opt;
    opt.sat.seed = derive_seed(derive_seed(cfg.seed, it), 0);
    opt.sat.bias_p = 0.5;
    SmtResult s = smt.solve(smt.distribution(history), opt);
    ASSERT_EQ(s.status, SmtStatus::Sat);
    SlotSet slots = cover_set(f, u, s.solution);
    if (state.num_solutions() > 0 && ast_score(state, slots) == 0) break;
    state.absorb(slots);
    history.push_back(s.abstraction);
    trace.push_back(coverage_star(state, u));
    if (coverage_star(state, u) >= cfg.target_coverage) break;
  }
  EXPECT_EQ(r.coverage_star_trace, trace);
}

TEST(Sampler, StopsOnCaps) {
  Formula f = pstest::load_fixture("suite/rq7.smt2");
  SamplerConfig cfg;
  cfg.max_solutions = 1;
  EXPECT_EQ(sample(f, cfg).reason, StopReason::MaxSolutions);
  cfg.max_solutions = 1000;
  cfg.time_budget = 1e-9;
  SampleResult r = sample(f, cfg);
  EXPECT_EQ(r.reason, StopReason::Timeout);
  EXPECT_FALSE(r.achieved);
}

TEST(Sampler, ConfigValidation) {
  Formula f = pstest::load_fixture("suite/rq7.smt2");
  SamplerConfig cfg;
  cfg.lambda = 0;
  EXPECT_THROW(Sampler(f, cfg), std::invalid_argument);
  cfg = {};
  cfg.target_coverage = 0;
  EXPECT_THROW(Sampler(f, cfg), std::invalid_argument);
  cfg = {};
  cfg.target_coverage = 1.5;
  EXPECT_THROW(Sampler(f, cfg), std::invalid_argument);
  cfg = {};
  cfg.bias_p = 0.2;
  EXPECT_THROW(Sampler(f, cfg), std::invalid_argument);
}

TEST(Sampler, ModeNames) {
  for (Mode m : {Mode::PanSampler, Mode::Alt1, Mode::Alt2, Mode::Alt3})
    EXPECT_EQ(parse_mode(mode_name(m)), m);
  EXPECT_FALSE(parse_mode("alt4").has_value());
  EXPECT_EQ(mode_name(Mode::PanSampler), "pansampler");
}
