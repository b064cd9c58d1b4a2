#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pansampler/term.hpp"

namespace pansampler {

class ParseError : public std::runtime_error {
 public:
  enum class Kind { Syntax, Sort, Unsupported, Quantifier, UndeclaredSymbol };

  ParseError(Kind kind, std::size_t line, std::size_t column,
             const std::string& message);

  Kind kind() const { return kind_; }
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  Kind kind_;
  std::size_t line_;
  std::size_t column_;
};

/// Generic s-expression with a source position, shared by the formula and
/// model readers.
struct SExpr {
  bool is_list = false;
  std::string atom;
  std::vector<SExpr> items;
  std::size_t line = 1;
  std::size_t column = 1;

  bool is_atom(std::string_view text) const { return !is_list && atom == text; }
};

/// Reads every top-level s-expression in `text`. Throws ParseError.
std::vector<SExpr> read_sexprs(std::string_view text);

/// Parses the supported SMT-LIB 2 subset (QF_BV, QF_ABV, QF_UFBV, QF_AUFBV).
/// Accepted commands: set-logic, declare-fun, declare-const, assert,
/// check-sat, exit. Informational commands (set-info, set-option, get-*,
/// echo) are ignored and recorded in Formula::warnings(). `let` is inlined.
Formula parse_formula(std::string_view text);

/// Parses a term against the declarations of an existing formula.
TermId parse_term(Formula& f, const SExpr& e);

/// Parses a sort expression such as "(_ BitVec 8)" or "(Array Bool Bool)".
Sort parse_sort(const SExpr& e);

}  // namespace pansampler
