#pragma once

#include <string>

#include "pansampler/term.hpp"

namespace pansampler {

/// Symbol spelling, wrapped in |...| when it is not a simple symbol.
std::string quote_symbol(const std::string& name);

/// Prints a term as an SMT-LIB expression. Shared subterms are expanded.
std::string print_term(const Formula& f, TermId t);

/// Stable SMT-LIB rendering: logic, declarations in order, assertions in
/// order, check-sat. Re-parsing the output yields a structurally identical
/// formula.
std::string print_formula(const Formula& f);

}  // namespace pansampler
