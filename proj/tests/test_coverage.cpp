#include <gtest/gtest.h>

#include <random>

#include "fuzz.hpp"
#include "pansampler/coverage.hpp"
#include "pansampler/evaluator.hpp"
#include "pansampler/oracle.hpp"
#include "test_util.hpp"

using namespace pansampler;
using pstest::with_scalars;

namespace {

std::size_t entries_of(const AstBitUniverse& u, TermId node) {
  std::size_t n = 0;
  for (const AstBitEntry& e : u.entries) n += e.node == node;
  return n;
}

// Random total assignment; arrays and functions get random defaults and a
// few random overrides.
Assignment random_assignment(const Formula& f, std::mt19937_64& rng) {
  auto rand_bv = [&](std::uint32_t w) {
    BitVector v(w);
    for (std::uint32_t i = 0; i < w; ++i) v.set_bit(i, rng() & 1);
    return v;
  };
  Assignment a = Assignment::zeros(f);
  for (SymbolId s = 0; s < f.symbols().size(); ++s) {
    const Sort& sort = f.symbol(s).sort;
    if (sort.is_scalar()) {
      a.set_scalar(s, rand_bv(sort.width()));
    } else if (sort.is_array()) {
      ArrayValue v{rand_bv(sort.element().width()), {}};
      for (int k = 0; k < 3; ++k)
        v.overrides[rand_bv(sort.index().width())] = rand_bv(sort.element().width());
      a[s] = v;
    } else {
      FunValue v{rand_bv(sort.range().width()), {}};
      for (int k = 0; k < 3; ++k) {
        std::vector<BitVector> args;
        for (const Sort& d : sort.domain()) args.push_back(rand_bv(d.width()));
        v.table[args] = rand_bv(sort.range().width());
      }
      a[s] = v;
    }
  }
  return a;
}

}  // namespace

TEST(Universe, BitVectorVariableContributesWidthEntries) {
  Formula f = parse_formula("(declare-const x (_ BitVec 3))(assert (= x #b101))");
  AstBitUniverse u = build_universe(f);
  EXPECT_EQ(entries_of(u, f.symbol(0).term), 3u);
  EXPECT_EQ(2 * entries_of(u, f.symbol(0).term), 6u);
}

TEST(Universe, SingleBoolNode) {
  Formula f = parse_formula("(declare-const x Bool)(assert x)");
  AstBitUniverse u = build_universe(f);
  EXPECT_EQ(u.entries.size(), 1u);
  EXPECT_EQ(u.slot_count(), 2u);
}

TEST(Universe, BvaddEqualityHasSevenEntries) {
  Formula f = parse_formula(
      "(declare-const a (_ BitVec 2))(declare-const b (_ BitVec 2))"
      "(assert (= (bvadd a b) #b00))");
  AstBitUniverse u = build_universe(f);
  EXPECT_EQ(u.entries.size(), 7u);
  EXPECT_EQ(u.slot_count(), 14u);
  for (const AstBitEntry& e : u.entries) EXPECT_NE(f.terms()[e.node].op, Op::Const);
}

TEST(Universe, SharedSubtermsCountOnce) {
  Formula f = parse_formula(
      "(declare-const x (_ BitVec 4))"
      "(assert (bvult (bvadd x #x1) (bvmul (bvadd x #x1) #x3)))");
  // x, bvadd, bvmul: 4 entries each; bvult: 1
  EXPECT_EQ(build_universe(f).entries.size(), 13u);
}

TEST(Evaluator, Rq7Equality) {
  Formula f = pstest::load_fixture("suite/rq7.smt2");
  Assignment a = with_scalars(f, {{"m", 3}, {"l", 1}});
  TermId eq = f.terms()[f.assertions()[0]].children[0];
  EXPECT_EQ(std::get<BitVector>(evaluate(f, eq, a)), BitVector::from_bool(true));
}

TEST(Evaluator, ReadOverWrite) {
  Formula f = parse_formula(
      "(declare-const a (Array (_ BitVec 3) (_ BitVec 3)))"
      "(declare-const i (_ BitVec 3))(declare-const v (_ BitVec 3))"
      "(assert (= (select (store a i v) i) v))");
  std::mt19937_64 rng(5);
  for (int k = 0; k < 50; ++k) EXPECT_TRUE(satisfies(f, random_assignment(f, rng)));
}

TEST(Evaluator, BvaddWrapsAround) {
  Formula f = parse_formula(
      "(declare-const a (_ BitVec 2))(declare-const b (_ BitVec 2))"
      "(assert (= (bvadd a b) #b00))");
  Assignment a = with_scalars(f, {{"a", 3}, {"b", 2}});
  TermId add = f.terms()[f.assertions()[0]].children[0];
  const std::uint64_t expected = (3 + 2) % 4;
  EXPECT_EQ(std::get<BitVector>(evaluate(f, add, a)), BitVector::from_u64(2, expected));
}

TEST(Evaluator, AgreesWithSlowEvaluatorOnFuzzCorpus) {
  std::mt19937_64 rng(17);
  for (auto logic : {pstest::FuzzLogic::BV, pstest::FuzzLogic::ABV, pstest::FuzzLogic::AUFBV}) {
    pstest::FuzzOptions opt;
    opt.logic = logic;
    opt.max_width = 9;
    for (const std::string& text : pstest::fuzz_corpus(23, 80, opt)) {
      Formula f = parse_formula(text);
      for (int k = 0; k < 8; ++k) {
        Assignment a = random_assignment(f, rng);
        Evaluator fast(f, a);
        oracle::SlowEvaluator slow(f, a);
        for (TermId t : reachable_terms(f)) {
          if (!f.terms()[t].sort.is_scalar()) continue;
          ASSERT_EQ(fast.scalar(t), slow.scalar(t)) << text;
        }
      }
    }
  }
}

TEST(CoverSet, SingleBool) {
  Formula f = parse_formula("(declare-const x Bool)(assert x)");
  AstBitUniverse u = build_universe(f);
  SlotSet s = cover_set(f, u, with_scalars(f, {{"x", 1}}));
  EXPECT_TRUE(s.test(1));
  EXPECT_FALSE(s.test(0));
}

TEST(CoverSet, OneSlotPerEntry) {
  std::mt19937_64 rng(3);
  pstest::FuzzOptions opt;
  opt.logic = pstest::FuzzLogic::AUFBV;
  for (const std::string& text : pstest::fuzz_corpus(5, 40, opt)) {
    Formula f = parse_formula(text);
    AstBitUniverse u = build_universe(f);
    SlotSet s = cover_set(f, u, random_assignment(f, rng));
    EXPECT_EQ(s.count(), u.entries.size());
    for (std::size_t k = 0; k < u.entries.size(); ++k) EXPECT_NE(s.test(2 * k), s.test(2 * k + 1));
  }
}

TEST(CoverSet, Rq7MatchesSlowEvaluator) {
  Formula f = pstest::load_fixture("suite/rq7.smt2");
  AstBitUniverse u = build_universe(f);
  Assignment a = with_scalars(f, {{"m", 3}, {"l", 1}});
  SlotSet fast = cover_set(f, u, a);
  EXPECT_EQ(fast, oracle::cover_set(f, u, a));
  const TermId implies = f.assertions()[0];
  const TermId eq = f.terms()[implies].children[0];
  for (std::size_t k = 0; k < u.entries.size(); ++k) {
    if (u.entries[k].node == implies || u.entries[k].node == eq) {
      EXPECT_TRUE(fast.test(2 * k + 1));
    }
  }
}

TEST(CoverageStar, EmptyAndSingleSolution) {
  Formula f = pstest::load_fixture("suite/rq7.smt2");
  AstBitUniverse u = build_universe(f);
  CoverState c(u);
  EXPECT_EQ(coverage_star(c, u), 0.0);
  c.absorb(cover_set(f, u, with_scalars(f, {{"m", 3}, {"l", 1}})));
  EXPECT_EQ(coverage_star(c, u), 0.5);
}

TEST(CoverageStar, ComplementarySolutionsCoverAll) {
  Formula f = pstest::load_fixture("suite/xnotx.smt2");
  AstBitUniverse u = build_universe(f);
  CoverState c(u);
  Assignment lo = with_scalars(f, {{"x", 0}});
  Assignment hi = with_scalars(f, {{"x", 1}});
  ASSERT_TRUE(oracle::satisfies(f, lo));
  ASSERT_TRUE(oracle::satisfies(f, hi));
  c.absorb(cover_set(f, u, lo));
  c.absorb(cover_set(f, u, hi));
  // x, (not x) and the root: the root is never false, so 5 of 6 slots.
  EXPECT_EQ(u.entries.size(), 3u);
  EXPECT_EQ(coverage_star(c, u), 5.0 / 6.0);
  oracle::EnumerationReport report = oracle::enumerate_solutions(f);
  EXPECT_EQ(report.valid_bits, 5u);
  std::vector<Assignment> both{lo, hi};
  EXPECT_EQ(oracle::exact_coverage(f, report, both), 1.0);
}

TEST(AstScore, Basics) {
  Formula f = pstest::load_fixture("suite/rq7.smt2");
  AstBitUniverse u = build_universe(f);
  CoverState c(u);
  Assignment a = with_scalars(f, {{"m", 3}, {"l", 1}});
  EXPECT_EQ(ast_score(f, u, c, a), u.entries.size());
  c.absorb(cover_set(f, u, a));
  EXPECT_EQ(ast_score(f, u, c, a), 0u);
}

TEST(AstScore, MatchesBruteForceSlotDiff) {
  Formula f = parse_formula(
      "(declare-const x (_ BitVec 2))(declare-const y (_ BitVec 2))"
      "(assert (bvule x (bvor x y)))");
  AstBitUniverse u = build_universe(f);
  CoverState c(u);
  c.absorb(cover_set(f, u, with_scalars(f, {{"x", 1}, {"y", 2}})));
  Assignment cand = with_scalars(f, {{"x", 1}, {"y", 3}});
  SlotSet fresh = oracle::cover_set(f, u, cand) - c.covered();
  EXPECT_EQ(ast_score(f, u, c, cand), fresh.count());
  // Only y bit 0 changes; bvor stays 3 and the comparison stays true.
  EXPECT_EQ(fresh.count(), 1u);
}

TEST(Manhattan, Examples) {
  Formula f = parse_formula("(declare-const x (_ BitVec 4))(assert (= x x))");
  Assignment zero = with_scalars(f, {{"x", 0}});
  Assignment ones = with_scalars(f, {{"x", 15}});
  EXPECT_EQ(manhattan_score(f, {}, ones), 0u);
  EXPECT_EQ(manhattan_score(f, std::vector<Assignment>{ones}, ones), 0u);
  EXPECT_EQ(manhattan_score(f, std::vector<Assignment>{zero}, ones), 4u);
  EXPECT_EQ(manhattan_score(f, std::vector<Assignment>{zero, zero}, ones), 8u);
}

TEST(Absorb, UnionAndCount) {
  Formula f = pstest::load_fixture("suite/xnotx.smt2");
  AstBitUniverse u = build_universe(f);
  SlotSet s = cover_set(f, u, with_scalars(f, {{"x", 1}}));
  CoverState c(u);
  c.absorb(s);
  EXPECT_EQ(c.covered(), s);
  c.absorb(s);
  EXPECT_EQ(c.covered(), s);
  EXPECT_EQ(c.num_solutions(), 2u);
  EXPECT_THROW(c.absorb(SlotSet(u.slot_count() + 2)), std::invalid_argument);
}

TEST(CoverageReport, Json) {
  Formula f = pstest::load_fixture("suite/xnotx.smt2");
  AstBitUniverse u = build_universe(f);
  CoverState c(u);
  c.absorb(cover_set(f, u, with_scalars(f, {{"x", 1}})));
  nlohmann::json j = coverage_report(c, u);
  EXPECT_EQ(j["covered_slots"], 3);
  EXPECT_EQ(j["total_slots"], 6);
  EXPECT_EQ(j["coverage_star"], 0.5);
  EXPECT_EQ(j["num_solutions"], 1);
}
