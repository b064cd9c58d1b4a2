#include <gtest/gtest.h>

#include <set>

#include "dpll.hpp"
#include "fuzz.hpp"
#include "pansampler/abstraction.hpp"
#include "pansampler/bitblast.hpp"
#include "pansampler/evaluator.hpp"
#include "pansampler/oracle.hpp"
#include "pansampler/sat_solver.hpp"
#include "test_util.hpp"

using namespace pansampler;

namespace {

std::vector<int> tracked_vars(const BlastMap& map) {
  std::vector<int> vars;
  for (const auto& bits : map.symbol_bits) vars.insert(vars.end(), bits.begin(), bits.end());
  return vars;
}

// Projected models via the production solver with blocking clauses.
std::vector<Model> cdcl_models(Cnf cnf, const std::vector<int>& vars) {
  std::vector<Model> out;
  SolverConfig cfg;
  while (true) {
    SatResult r = solve(cnf, {}, cfg);
    if (r.status != SatStatus::Sat) return out;
    out.push_back(r.model);
    std::vector<int> block;
    for (int v : vars) block.push_back(lit_value(r.model, v) ? -v : v);
    if (block.empty()) return out;
    cnf.add_clause(block);
  }
}

std::uint64_t read_bits(const Model& m, const std::vector<int>& vars) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < vars.size(); ++i)
    if (lit_value(m, vars[i])) v |= std::uint64_t{1} << i;
  return v;
}

}  // namespace

TEST(Abstraction, PureBitVectorIsUnchanged) {
  Formula f = pstest::load_fixture("suite/rq7.smt2");
  Abstraction abs(f);
  EXPECT_TRUE(abs.atoms().empty());
  EXPECT_EQ(abs.abstracted().symbols().size(), f.symbols().size());
  EXPECT_EQ(abs.abstracted().assertions().size(), f.assertions().size());
  EXPECT_EQ(reachable_terms(abs.abstracted()).size(), reachable_terms(f).size());
}

TEST(Abstraction, SelectBecomesFreshVariable) {
  Formula f = parse_formula(
      "(declare-const a (Array (_ BitVec 2) (_ BitVec 1)))(declare-const i (_ BitVec 2))"
      "(assert (= (select a i) #b1))");
  Abstraction abs(f);
  ASSERT_EQ(abs.atoms().size(), 1u);
  EXPECT_EQ(abs.atoms()[0].kind, AtomKind::Select);
  const Formula& g = abs.abstracted();
  EXPECT_EQ(g.symbols().size(), f.symbols().size() + 1);
  EXPECT_EQ(g.symbol(abs.atoms()[0].fresh).sort, Sort::bitvec(1));
  const Node& root = g.terms()[g.assertions()[0]];
  ASSERT_EQ(root.op, Op::Eq);
  EXPECT_EQ(root.children[0], abs.atoms()[0].var);
  for (TermId t : reachable_terms(g)) {
    EXPECT_NE(g.terms()[t].op, Op::Select);
    EXPECT_NE(g.terms()[t].op, Op::Store);
    EXPECT_NE(g.terms()[t].op, Op::Apply);
  }
}

TEST(Abstraction, ApplicationsBecomeFreshResults) {
  Formula f = parse_formula(
      "(declare-fun f ((_ BitVec 2)) (_ BitVec 2))(declare-const x (_ BitVec 2))"
      "(declare-const y (_ BitVec 2))(assert (= (f x) (f y)))");
  Abstraction abs(f);
  ASSERT_EQ(abs.atoms().size(), 2u);
  for (const AbstractAtom& a : abs.atoms()) EXPECT_EQ(a.kind, AtomKind::Apply);
  const Formula& g = abs.abstracted();
  const Node& root = g.terms()[g.assertions()[0]];
  ASSERT_EQ(root.op, Op::Eq);
  EXPECT_EQ(root.children[0], abs.atoms()[0].var);
  EXPECT_EQ(root.children[1], abs.atoms()[1].var);
}

TEST(Abstraction, ArrayEqualityGetsWitness) {
  Formula f = pstest::load_fixture("abv_ext.smt2");
  Abstraction abs(f);
  std::size_t eqs = 0, witnesses = 0;
  for (const AbstractAtom& a : abs.atoms()) {
    eqs += a.kind == AtomKind::ArrayEq;
    witnesses += a.kind == AtomKind::Witness;
  }
  EXPECT_EQ(eqs, 2u);
  EXPECT_EQ(witnesses, eqs);
}

TEST(Abstraction, SolutionsProjectToAbstractSolutions) {
  for (auto logic : {pstest::FuzzLogic::ABV, pstest::FuzzLogic::AUFBV}) {
    for (const std::string& text :
         pstest::fuzz_corpus(31, 40, pstest::enumerable_options(logic, 10))) {
      Formula f = parse_formula(text);
      Abstraction abs(f);
      oracle::EnumerationReport report = oracle::enumerate_solutions(f, 10);
      for (const Assignment& a : report.solutions)
        ASSERT_TRUE(oracle::satisfies(abs.abstracted(), project_to_abstraction(f, abs, a)))
            << text;
    }
  }
}

TEST(BitBlast, UnitFormula) {
  Formula f = parse_formula("(declare-const x Bool)(assert x)");
  Abstraction abs(f);
  auto [cnf, map] = bit_blast(abs, {});
  EXPECT_EQ(cnf.num_vars, 1u);
  ASSERT_EQ(cnf.clauses.size(), 1u);
  EXPECT_EQ(cnf.clauses[0], std::vector<int>{map.symbol_bits[0][0]});
  Assignment a = lift_model(f, map, Model{true});
  EXPECT_EQ(a.scalar(0), BitVector::from_bool(true));
}

TEST(BitBlast, XnorGadget) {
  Formula f = parse_formula(
      "(declare-const x (_ BitVec 1))(declare-const y (_ BitVec 1))(assert (= x y))");
  Abstraction abs(f);
  auto [cnf, map] = bit_blast(abs, {});
  const std::vector<int> vars{map.symbol_bits[0][0], map.symbol_bits[1][0]};
  std::set<std::vector<bool>> models;
  for (auto& m : pstest::enumerate_projected(cnf, vars)) models.insert(m);
  std::set<std::vector<bool>> expected{{false, false}, {true, true}};
  EXPECT_EQ(models, expected);

  Cnf forced = cnf;
  for (int v : vars) forced.add_clause({v});
  auto m = pstest::Dpll(forced).solve();
  ASSERT_TRUE(m.has_value());
  Assignment a = lift_model(f, map, *m);
  EXPECT_EQ(a.scalar(0), BitVector::from_u64(1, 1));
  EXPECT_EQ(a.scalar(1), BitVector::from_u64(1, 1));
  EXPECT_TRUE(pansampler::satisfies(f, a));
}

TEST(BitBlast, UnsignedLessThanHasSixModels) {
  Formula f = parse_formula(
      "(declare-const x (_ BitVec 2))(declare-const y (_ BitVec 2))(assert (bvult x y))");
  Abstraction abs(f);
  auto [cnf, map] = bit_blast(abs, {});
  std::set<std::pair<int, int>> expected;
  for (int x = 0; x < 4; ++x)
    for (int y = 0; y < 4; ++y)
      if (x < y) expected.insert({x, y});
  ASSERT_EQ(expected.size(), 6u);
  std::set<std::pair<int, int>> got;
  std::vector<int> vars = tracked_vars(map);
  for (const auto& m : pstest::enumerate_projected(cnf, vars))
    got.insert({m[0] + 2 * m[1], m[2] + 2 * m[3]});
  EXPECT_EQ(got, expected);
}

TEST(BitBlast, LiftRejectsShortModel) {
  Formula f = parse_formula("(declare-const x (_ BitVec 4))(assert (= x #x3))");
  Abstraction abs(f);
  auto [cnf, map] = bit_blast(abs, {});
  EXPECT_THROW(lift_model(f, map, Model(2)), std::invalid_argument);
}

// Every operator, exhaustively at width 3: the CNF's projected models over
// (x, y, z) are exactly the evaluator's graph z = op(x, y).
TEST(BitBlast, OperatorsMatchEvaluatorExhaustively) {
  const std::vector<std::string> binary{"bvadd", "bvsub",  "bvmul",  "bvudiv", "bvurem",
                                        "bvand", "bvor",   "bvxor",  "bvshl",  "bvlshr",
                                        "bvashr"};
  const std::vector<std::string> preds{"bvult", "bvule", "bvugt", "bvuge", "bvslt",
                                       "bvsle", "bvsgt", "bvsge", "=",     "distinct"};
  std::vector<std::pair<std::string, std::uint32_t>> cases;
  for (const auto& op : binary) cases.push_back({"(" + op + " x y)", 3});
  for (const auto& op : preds) cases.push_back({"(ite (" + op + " x y) #b001 #b000)", 3});
  cases.push_back({"(bvnot x)", 3});
  cases.push_back({"(bvneg x)", 3});
  cases.push_back({"((_ extract 2 0) (concat x y))", 3});
  cases.push_back({"((_ extract 4 2) ((_ sign_extend 2) x))", 3});
  cases.push_back({"((_ extract 4 2) ((_ zero_extend 2) y))", 3});
  cases.push_back({"(ite (bvult y x) (bvmul x x) (bvudiv y x))", 3});

  for (const auto& [expr, w] : cases) {
    const std::string ws = std::to_string(w);
    Formula f = parse_formula("(declare-const x (_ BitVec " + ws +
                              "))(declare-const y (_ BitVec " + ws +
                              "))(declare-const z (_ BitVec " + ws + "))(assert (= z " +
                              expr + "))");
    Abstraction abs(f);
    auto [cnf, map] = bit_blast(abs, {});
    std::vector<Model> models = cdcl_models(cnf, tracked_vars(map));
    ASSERT_EQ(models.size(), 64u) << expr;
    std::set<std::uint64_t> seen;
    for (const Model& m : models) {
      Assignment a = lift_model(f, map, m);
      EXPECT_TRUE(oracle::satisfies(f, a)) << expr;
      seen.insert(read_bits(m, map.symbol_bits[0]) | read_bits(m, map.symbol_bits[1]) << w);
    }
    EXPECT_EQ(seen.size(), 64u) << expr;
  }
}

TEST(BitBlast, WideArithmeticMatchesEvaluator) {
  Formula f = parse_formula(
      "(declare-const x (_ BitVec 70))(declare-const y (_ BitVec 70))"
      "(assert (= (bvudiv (bvmul x (_ bv3 70)) y) (_ bv5 70)))"
      "(assert (bvugt y (_ bv256 70)))");
  Abstraction abs(f);
  auto [cnf, map] = bit_blast(abs, {});
  SatResult r = solve(cnf, {}, SolverConfig{});
  ASSERT_EQ(r.status, SatStatus::Sat);
  EXPECT_TRUE(oracle::satisfies(f, lift_model(f, map, r.model)));
}

TEST(BitBlast, ProjectedModelCountMatchesOracle) {
  std::size_t checked = 0;
  for (auto logic : {pstest::FuzzLogic::BV, pstest::FuzzLogic::ABV, pstest::FuzzLogic::AUFBV}) {
    for (const std::string& text :
         pstest::fuzz_corpus(41, 40, pstest::enumerable_options(logic, 8))) {
      Formula f = parse_formula(text);
      Abstraction abs(f);
      const Formula& g = abs.abstracted();
      if (oracle::domain_bits(g) > 12) continue;
      auto [cnf, map] = bit_blast(abs, {});
      std::vector<Model> models = cdcl_models(cnf, tracked_vars(map));
      oracle::EnumerationReport report = oracle::enumerate_solutions(g, 12);
      // The abstracted formula still declares the original arrays and
      // functions; their tables are unconstrained, so compare scalar parts.
      std::set<std::string> scalar_parts;
      for (const Assignment& a : report.solutions) {
        std::string key;
        for (SymbolId s : g.scalar_symbols()) key += a.scalar(s).to_binary() + ",";
        scalar_parts.insert(key);
      }
      EXPECT_EQ(models.size(), scalar_parts.size()) << text;
      for (const Model& m : models) EXPECT_TRUE(oracle::satisfies(g, lift_model(g, map, m)));
      ++checked;
    }
  }
  EXPECT_GE(checked, 60u);
}

TEST(BitBlast, DeterministicNumbering) {
  Formula f = pstest::load_fixture("aufbv_mixed.smt2");
  Abstraction a1(f), a2(f);
  EXPECT_EQ(bit_blast(a1, {}).first.clauses, bit_blast(a2, {}).first.clauses);
}

TEST(Dimacs, RoundTrip) {
  Formula f = pstest::load_fixture("suite/rq7.smt2");
  Abstraction abs(f);
  Cnf cnf = bit_blast(abs, {}).first;
  std::string text = to_dimacs(cnf);
  EXPECT_EQ(text.rfind("p cnf ", 0), 0u);
  Cnf back = parse_dimacs(text);
  EXPECT_EQ(back.num_vars, cnf.num_vars);
  EXPECT_EQ(back.clauses, cnf.clauses);
  EXPECT_THROW(parse_dimacs("p cnf 1 1\n2 0\n"), std::runtime_error);
}
