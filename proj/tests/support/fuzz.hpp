#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace pstest {

enum class FuzzLogic { BV, ABV, AUFBV };

struct FuzzOptions {
  FuzzLogic logic = FuzzLogic::BV;
  std::uint32_t max_width = 6;
  std::uint32_t num_bv = 3;     // upper bound on bit-vector variables
  std::uint32_t num_bool = 2;   // upper bound on Bool variables
  std::uint32_t num_arrays = 2;
  std::uint32_t num_funs = 2;
  std::uint32_t index_width = 2;  // array index and function argument width
  std::uint32_t max_depth = 3;
  std::uint32_t max_assertions = 3;
  /// Keep the finite domain (scalars plus full tables) at or below this
  /// many bits; 0 disables the limit.
  std::uint32_t domain_bit_limit = 0;
};

/// Random well-sorted SMT-LIB script over the operator set of the sampler.
std::string random_script(std::mt19937_64& rng, const FuzzOptions& opt);

/// `count` scripts from one seeded generator; each is parsed before it is
/// returned, so a generator bug surfaces as a ParseError.
std::vector<std::string> fuzz_corpus(std::uint64_t seed, std::size_t count,
                                     const FuzzOptions& opt);

/// Array/UF micro-formulas with at most `domain_bits` enumerable bits.
FuzzOptions enumerable_options(FuzzLogic logic, std::uint32_t domain_bits);

}  // namespace pstest
