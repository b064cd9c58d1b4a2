#include <benchmark/benchmark.h>

#include <fstream>
#include <random>
#include <sstream>

#include "pansampler/abstraction.hpp"
#include "pansampler/bitblast.hpp"
#include "pansampler/coverage.hpp"
#include "pansampler/parser.hpp"
#include "pansampler/sampler.hpp"
#include "pansampler/sat_solver.hpp"

using namespace pansampler;

namespace {

std::string read_fixture(const char* name) {
  std::ifstream in(std::string(BENCH_FIXTURE_DIR) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Cnf random_3sat(std::uint64_t seed, int vars, double ratio) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> var(1, vars);
  std::bernoulli_distribution neg(0.5);
  Cnf cnf;
  cnf.num_vars = vars;
  const int clauses = static_cast<int>(ratio * vars);
  for (int c = 0; c < clauses; ++c) {
    std::vector<int> cl;
    for (int k = 0; k < 3; ++k) cl.push_back(neg(rng) ? -var(rng) : var(rng));
    cnf.add_clause(cl);
  }
  return cnf;
}

// Wide multiplier constraint used to exercise bit-blasting and search.
const char* kMul =
    "(declare-const x (_ BitVec 16))(declare-const y (_ BitVec 16))"
    "(assert (= (bvmul x y) #x1234))(assert (bvugt x #x0001))(assert (bvugt y #x0001))";

}  // namespace

static void BM_SolveRandom3Sat(benchmark::State& state) {
  Cnf cnf = random_3sat(42, static_cast<int>(state.range(0)), 4.0);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    SolverConfig cfg;
    cfg.seed = ++seed;
    benchmark::DoNotOptimize(solve(cnf, {}, cfg));
  }
}
BENCHMARK(BM_SolveRandom3Sat)->Arg(50)->Arg(100)->Arg(150);

static void BM_BitBlastMultiplier(benchmark::State& state) {
  Formula f = parse_formula(kMul);
  for (auto _ : state) benchmark::DoNotOptimize(bit_blast(Abstraction(f), {}).first.clauses.size());
}
BENCHMARK(BM_BitBlastMultiplier);

static void BM_CoverSet(benchmark::State& state) {
  Formula f = parse_formula(kMul);
  AstBitUniverse u = build_universe(f);
  Assignment a = Assignment::zeros(f);
  for (auto _ : state) benchmark::DoNotOptimize(cover_set(f, u, a).count());
}
BENCHMARK(BM_CoverSet);

static void BM_SampleFixture(benchmark::State& state, const char* name, Mode mode) {
  Formula f = parse_formula(read_fixture(name));
  for (auto _ : state) {
    SamplerConfig cfg;
    cfg.mode = mode;
    cfg.lambda = 10;
    benchmark::DoNotOptimize(sample(f, cfg).solutions.size());
  }
}
BENCHMARK_CAPTURE(BM_SampleFixture, rq7_pansampler, "suite/rq7.smt2", Mode::PanSampler)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_SampleFixture, rq7_alt3, "suite/rq7.smt2", Mode::Alt3)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_SampleFixture, aufbv_pansampler, "aufbv_mixed.smt2", Mode::PanSampler)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
