#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace pansampler {

/// Clause database over DIMACS literals (variables numbered from 1, negative
/// literals are negations).
struct Cnf {
  std::uint32_t num_vars = 0;
  std::vector<std::vector<int>> clauses;

  int new_var() { return static_cast<int>(++num_vars); }

  /// Adds a clause after removing duplicate literals. Tautologies are
  /// dropped. An empty input adds the empty clause.
  void add_clause(std::vector<int> lits);
};

/// Model over variables 1..num_vars; model[v - 1] is the value of v.
using Model = std::vector<bool>;

inline bool lit_value(const Model& m, int lit) {
  bool v = m[static_cast<std::size_t>(lit > 0 ? lit : -lit) - 1];
  return lit > 0 ? v : !v;
}

/// True when every clause has a true literal under m.
bool satisfies(const Cnf& cnf, const Model& m);

std::string to_dimacs(const Cnf& cnf);
/// Throws std::runtime_error on malformed input.
Cnf parse_dimacs(std::string_view text);

/// SAT-competition style model line: "v 1 -2 3 0".
std::string model_line(const Model& m);

}  // namespace pansampler
