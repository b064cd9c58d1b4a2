#include <gtest/gtest.h>

#include "fuzz.hpp"
#include "pansampler/abstraction.hpp"
#include "pansampler/diversity_smt.hpp"
#include "pansampler/evaluator.hpp"
#include "pansampler/oracle.hpp"
#include "pansampler/theory.hpp"
#include "test_util.hpp"

using namespace pansampler;

namespace {

// Candidate over the abstraction: named original scalars plus atom values
// in atom order.
Assignment candidate(const Formula& f, const Abstraction& abs,
                     std::initializer_list<std::pair<const char*, std::uint64_t>> vars,
                     std::initializer_list<std::uint64_t> atoms) {
  const Formula& g = abs.abstracted();
  Assignment a = Assignment::zeros(g);
  for (const auto& [name, v] : vars) {
    SymbolId s = pstest::sym(f, name);
    a.set_scalar(s, BitVector::from_u64(g.symbol(s).sort.width(), v));
  }
  std::size_t k = 0;
  for (std::uint64_t v : atoms) {
    SymbolId s = abs.atoms()[k++].fresh;
    a.set_scalar(s, BitVector::from_u64(g.symbol(s).sort.width(), v));
  }
  return a;
}

bool holds(Abstraction& abs, const Assignment& a, TermId lemma) {
  return Evaluator(abs.abstracted().terms(), a).truth(lemma);
}

}  // namespace

TEST(Arrays, ReadOverWriteConflict) {
  Formula f = parse_formula(
      "(declare-const a (Array (_ BitVec 3) (_ BitVec 3)))"
      "(declare-const i (_ BitVec 3))(declare-const v (_ BitVec 3))"
      "(assert (bvuge (select (store a i v) i) #b000))");
  Abstraction abs(f);
  ASSERT_EQ(abs.atoms().size(), 1u);
  Assignment bad = candidate(f, abs, {{"i", 2}, {"v", 5}}, {3});
  TheoryVerdict v = check_arrays(f, abs, bad);
  ASSERT_EQ(v.lemmas.size(), 1u);
  EXPECT_FALSE(holds(abs, bad, v.lemmas[0]));

  Assignment good = candidate(f, abs, {{"i", 2}, {"v", 5}}, {5});
  TheoryVerdict ok = check_arrays(f, abs, good);
  ASSERT_TRUE(ok.consistent());
  EXPECT_TRUE(satisfies(f, ok.completed));
  Evaluator ev(f, ok.completed);
  TermId store = f.terms()[f.terms()[f.assertions()[0]].children[0]].children[0];
  const ArrayValue& stored = ev.array(store);
  EXPECT_EQ(stored.read(BitVector::from_u64(3, 2)), BitVector::from_u64(3, 5));
}

TEST(Arrays, ReadCongruenceConflict) {
  Formula f = parse_formula(
      "(declare-const a (Array (_ BitVec 2) (_ BitVec 2)))"
      "(declare-const i (_ BitVec 2))(declare-const j (_ BitVec 2))"
      "(assert (bvult (select a i) (select a j)))");
  Abstraction abs(f);
  ASSERT_EQ(abs.atoms().size(), 2u);
  Assignment bad = candidate(f, abs, {{"i", 1}, {"j", 1}}, {2, 3});
  TheoryVerdict v = check_arrays(f, abs, bad);
  ASSERT_EQ(v.lemmas.size(), 1u);
  EXPECT_FALSE(holds(abs, bad, v.lemmas[0]));
  // The lemma is the congruence instance: it holds once the indices differ.
  Assignment apart = candidate(f, abs, {{"i", 1}, {"j", 0}}, {2, 3});
  EXPECT_TRUE(holds(abs, apart, v.lemmas[0]));
  TheoryVerdict ok = check_arrays(f, abs, apart);
  ASSERT_TRUE(ok.consistent());
  EXPECT_TRUE(satisfies(f, ok.completed));
  const ArrayValue& a = std::get<ArrayValue>(ok.completed[pstest::sym(f, "a")]);
  EXPECT_TRUE(a.default_value.is_zero());
}

TEST(Functions, CongruenceConflict) {
  Formula f = parse_formula(
      "(declare-fun g ((_ BitVec 2)) (_ BitVec 2))(declare-const x (_ BitVec 2))"
      "(declare-const y (_ BitVec 2))(assert (= x y))(assert (distinct (g x) (g y)))");
  Abstraction abs(f);
  Assignment bad = candidate(f, abs, {{"x", 1}, {"y", 1}}, {0, 2});
  TheoryVerdict v = check_functions(f, abs, bad);
  ASSERT_EQ(v.lemmas.size(), 1u);
  EXPECT_FALSE(holds(abs, bad, v.lemmas[0]));
}

TEST(Functions, SingleApplicationIsConsistent) {
  Formula f = parse_formula(
      "(declare-fun g ((_ BitVec 2)) (_ BitVec 2))(declare-const x (_ BitVec 2))"
      "(assert (= (g x) #b10))");
  Abstraction abs(f);
  for (std::uint64_t x = 0; x < 4; ++x) {
    TheoryVerdict v = check_functions(f, abs, candidate(f, abs, {{"x", x}}, {2}));
    ASSERT_TRUE(v.consistent());
    EXPECT_TRUE(satisfies(f, v.completed));
  }
}

TEST(Functions, OneLemmaAmongViolatedPairs) {
  Formula f = parse_formula(
      "(declare-fun g ((_ BitVec 2)) (_ BitVec 2))(declare-const x (_ BitVec 2))"
      "(declare-const y (_ BitVec 2))(declare-const z (_ BitVec 2))"
      "(assert (bvule (g x) (bvadd (g y) (g z))))");
  Abstraction abs(f);
  ASSERT_EQ(abs.atoms().size(), 3u);
  Assignment bad = candidate(f, abs, {{"x", 2}, {"y", 2}, {"z", 2}}, {1, 1, 3});
  // Violated pairs by enumeration: (x, z) and (y, z).
  std::size_t violated = 0;
  for (std::size_t p = 0; p < 3; ++p)
    for (std::size_t q = p + 1; q < 3; ++q)
      violated += bad.scalar(abs.atoms()[p].fresh) != bad.scalar(abs.atoms()[q].fresh);
  ASSERT_EQ(violated, 2u);

  TheoryVerdict one = check_functions(f, abs, bad);
  ASSERT_EQ(one.lemmas.size(), 1u);
  EXPECT_FALSE(holds(abs, bad, one.lemmas[0]));
  TheoryVerdict all = check_functions(f, abs, bad, true);
  ASSERT_EQ(all.lemmas.size(), violated);
  for (TermId l : all.lemmas) EXPECT_FALSE(holds(abs, bad, l));
}

TEST(Theory, BoundCountsInstances) {
  Formula f = parse_formula(
      "(declare-fun g ((_ BitVec 2)) (_ BitVec 2))(declare-const x (_ BitVec 2))"
      "(declare-const y (_ BitVec 2))(declare-const z (_ BitVec 2))"
      "(assert (bvule (g x) (bvadd (g y) (g z))))");
  Abstraction abs(f);
  EXPECT_EQ(axiom_instance_bound(f, abs), 3u);  // C(3, 2)
}

// Lemmas learned on random formulas are theory-valid: every true solution of
// the original formula satisfies them.
TEST(Theory, LearnedLemmasAreValid) {
  std::size_t lemmas = 0;
  for (auto logic : {pstest::FuzzLogic::ABV, pstest::FuzzLogic::AUFBV}) {
    for (const std::string& text :
         pstest::fuzz_corpus(53, 60, pstest::enumerable_options(logic, 10))) {
      Formula f = parse_formula(text);
      oracle::EnumerationReport report = oracle::enumerate_solutions(f, 10);
      DiversitySmt smt(f);
      std::vector<Assignment> history;
      for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        SmtOptions opt;
        opt.sat.seed = seed;
        SmtResult r = smt.solve(smt.distribution(history), opt);
        if (r.status != SmtStatus::Sat) break;
        ASSERT_TRUE(oracle::satisfies(f, r.solution)) << text;
        history.push_back(r.abstraction);
      }
      EXPECT_EQ(history.empty(), report.solutions.empty()) << text;
      EXPECT_LE(smt.lemmas().size(), smt.lemma_bound()) << text;
      for (const Assignment& sol : report.solutions) {
        Assignment proj = smt.project(sol);
        Evaluator ev(smt.abstraction().abstracted().terms(), proj);
        for (TermId l : smt.lemmas()) ASSERT_TRUE(ev.truth(l)) << text;
      }
      lemmas += smt.lemmas().size();
    }
  }
  EXPECT_GT(lemmas, 0u);
}
