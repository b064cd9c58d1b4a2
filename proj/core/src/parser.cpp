#include "pansampler/parser.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <unordered_map>

namespace pansampler {

ParseError::ParseError(Kind kind, std::size_t line, std::size_t column,
                       const std::string& message)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) +
                         ": " + message),
      kind_(kind),
      line_(line),
      column_(column) {}

namespace {

using Kind = ParseError::Kind;

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  std::vector<SExpr> read_all() {
    std::vector<SExpr> out;
    skip_space();
    while (pos_ < text_.size()) {
      out.push_back(read_one());
      skip_space();
    }
    return out;
  }

 private:
  SExpr read_one() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    SExpr e;
    e.line = line_;
    e.column = column_;
    char c = text_[pos_];
    if (c == '(') {
      advance();
      e.is_list = true;
      for (;;) {
        skip_space();
        if (pos_ >= text_.size())
          throw ParseError(Kind::Syntax, e.line, e.column,
                           "unbalanced parenthesis");
        if (text_[pos_] == ')') {
          advance();
          break;
        }
        e.items.push_back(read_one());
      }
      return e;
    }
    if (c == ')') fail("unexpected ')'");
    if (c == '|') {
      advance();
      std::string s;
      while (pos_ < text_.size() && text_[pos_] != '|') s.push_back(advance());
      if (pos_ >= text_.size()) fail("unterminated quoted symbol");
      advance();
      e.atom = std::move(s);
      return e;
    }
    if (c == '"') {
      std::string s(1, advance());
      for (;;) {
        if (pos_ >= text_.size()) fail("unterminated string literal");
        char d = advance();
        s.push_back(d);
        if (d == '"') {
          if (pos_ < text_.size() && text_[pos_] == '"') {
            s.push_back(advance());
            continue;
          }
          break;
        }
      }
      e.atom = std::move(s);
      return e;
    }
    std::string s;
    while (pos_ < text_.size()) {
      char d = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(d)) || d == '(' ||
          d == ')' || d == ';' || d == '|' || d == '"')
        break;
      s.push_back(advance());
    }
    e.atom = std::move(s);
    return e;
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  char advance() {
    char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    return c;
  }

  [[noreturn]] void fail(const std::string& msg) {
    throw ParseError(Kind::Syntax, line_, column_, msg);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

[[noreturn]] void fail_at(const SExpr& e, Kind kind, const std::string& msg) {
  throw ParseError(kind, e.line, e.column, msg);
}

std::uint32_t parse_numeral(const SExpr& e) {
  if (e.is_list || e.atom.empty() ||
      !std::all_of(e.atom.begin(), e.atom.end(),
                   [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
    fail_at(e, Kind::Syntax, "expected numeral");
  if (e.atom.size() > 9) fail_at(e, Kind::Syntax, "numeral too large");
  return static_cast<std::uint32_t>(std::stoul(e.atom));
}

const std::unordered_map<std::string_view, Op>& simple_ops() {
  static const std::unordered_map<std::string_view, Op> ops = {
      {"bvadd", Op::BvAdd},   {"bvsub", Op::BvSub},   {"bvmul", Op::BvMul},
      {"bvudiv", Op::BvUdiv}, {"bvurem", Op::BvUrem}, {"bvand", Op::BvAnd},
      {"bvor", Op::BvOr},     {"bvxor", Op::BvXor},   {"bvnot", Op::BvNot},
      {"bvneg", Op::BvNeg},   {"bvshl", Op::BvShl},   {"bvlshr", Op::BvLshr},
      {"bvashr", Op::BvAshr}, {"bvult", Op::BvUlt},   {"bvule", Op::BvUle},
      {"bvugt", Op::BvUgt},   {"bvuge", Op::BvUge},   {"bvslt", Op::BvSlt},
      {"bvsle", Op::BvSle},   {"bvsgt", Op::BvSgt},   {"bvsge", Op::BvSge},
      {"concat", Op::Concat}, {"ite", Op::Ite},       {"=", Op::Eq},
      {"distinct", Op::Distinct}, {"and", Op::And},   {"or", Op::Or},
      {"xor", Op::Xor},       {"not", Op::Not},       {"=>", Op::Implies},
      {"select", Op::Select}, {"store", Op::Store},
  };
  return ops;
}

class TermParser {
 public:
  explicit TermParser(Formula& f) : f_(f) {}

  TermId parse(const SExpr& e) {
    try {
      return parse_impl(e);
    } catch (const SortError& err) {
      fail_at(e, Kind::Sort, err.what());
    }
  }

 private:
  TermId parse_impl(const SExpr& e) {
    if (!e.is_list) return parse_atom(e);
    if (e.items.empty()) fail_at(e, Kind::Syntax, "empty application");
    const SExpr& head = e.items[0];

    if (head.is_list) return parse_indexed(e);

    const std::string& name = head.atom;
    if (name == "let") return parse_let(e);
    if (name == "forall" || name == "exists")
      fail_at(e, Kind::Quantifier, "quantifiers are not supported");
    if (name == "!") {
      if (e.items.size() < 2) fail_at(e, Kind::Syntax, "empty annotation");
      return parse_impl(e.items[1]);
    }
    if (name == "_") fail_at(e, Kind::Syntax, "misplaced indexed identifier");

    std::vector<TermId> args;
    args.reserve(e.items.size() - 1);
    for (std::size_t i = 1; i < e.items.size(); ++i)
      args.push_back(parse_sorted(e.items[i]));

    if (auto sym = f_.find_symbol(name); sym && !bound(name)) {
      const Symbol& s = f_.symbol(*sym);
      if (!s.sort.is_fun())
        fail_at(head, Kind::Syntax, "'" + name + "' is not a function");
      return with_pos(e, [&] {
        return f_.terms().mk_apply(*sym, s.sort, std::move(args));
      });
    }

    auto it = simple_ops().find(name);
    if (it == simple_ops().end())
      fail_at(head, Kind::Unsupported, "unsupported operator '" + name + "'");
    Op op = it->second;
    auto& ts = f_.terms();
    return with_pos(e, [&]() -> TermId {
      if (op == Op::Implies && args.size() > 2) {
        TermId acc = args.back();
        for (std::size_t i = args.size() - 1; i-- > 0;)
          acc = ts.mk(Op::Implies, {args[i], acc});
        return acc;
      }
      if ((op == Op::Concat || op == Op::BvSub) && args.size() > 2) {
        TermId acc = args[0];
        for (std::size_t i = 1; i < args.size(); ++i)
          acc = ts.mk(op, {acc, args[i]});
        return acc;
      }
      return ts.mk(op, std::move(args));
    });
  }

  TermId parse_sorted(const SExpr& e) { return parse_impl(e); }

  template <typename Fn>
  TermId with_pos(const SExpr& e, Fn&& fn) {
    try {
      return fn();
    } catch (const SortError& err) {
      fail_at(e, Kind::Sort, err.what());
    }
  }

  TermId parse_atom(const SExpr& e) {
    const std::string& a = e.atom;
    auto& ts = f_.terms();
    if (a == "true") return ts.mk_bool(true);
    if (a == "false") return ts.mk_bool(false);
    try {
      if (a.rfind("#b", 0) == 0)
        return ts.mk_const(BitVector::parse_binary(a.substr(2)), false);
      if (a.rfind("#x", 0) == 0)
        return ts.mk_const(BitVector::parse_hex(a.substr(2)), false);
    } catch (const std::invalid_argument& err) {
      fail_at(e, Kind::Syntax, err.what());
    }
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
      auto found = it->find(a);
      if (found != it->end()) return found->second;
    }
    if (auto sym = f_.find_symbol(a)) {
      const Symbol& s = f_.symbol(*sym);
      if (s.sort.is_fun()) {
        if (!s.sort.domain().empty())
          fail_at(e, Kind::Sort, "function '" + a + "' used without arguments");
        return ts.mk_apply(*sym, s.sort, {});
      }
      return s.term;
    }
    if (!a.empty() && std::isdigit(static_cast<unsigned char>(a[0])))
      fail_at(e, Kind::Unsupported, "integer literals are not supported");
    fail_at(e, Kind::UndeclaredSymbol, "undeclared symbol '" + a + "'");
  }

  TermId parse_indexed(const SExpr& e) {
    const SExpr& head = e.items[0];
    if (head.items.size() < 2 || !head.items[0].is_atom("_"))
      fail_at(head, Kind::Unsupported, "unsupported compound operator");
    const std::string& name = head.items[1].atom;
    std::vector<TermId> args;
    for (std::size_t i = 1; i < e.items.size(); ++i)
      args.push_back(parse_impl(e.items[i]));
    auto& ts = f_.terms();
    if (name == "extract") {
      if (head.items.size() != 4) fail_at(head, Kind::Syntax, "bad extract");
      std::uint32_t hi = parse_numeral(head.items[2]);
      std::uint32_t lo = parse_numeral(head.items[3]);
      return with_pos(e, [&] { return ts.mk(Op::Extract, args, hi, lo); });
    }
    if (name == "zero_extend" || name == "sign_extend") {
      if (head.items.size() != 3) fail_at(head, Kind::Syntax, "bad extend");
      std::uint32_t n = parse_numeral(head.items[2]);
      Op op = name == "zero_extend" ? Op::ZeroExtend : Op::SignExtend;
      return with_pos(e, [&] { return ts.mk(op, args, n); });
    }
    fail_at(head, Kind::Unsupported, "unsupported indexed operator '" + name + "'");
  }

  TermId parse_let(const SExpr& e) {
    if (e.items.size() != 3 || !e.items[1].is_list)
      fail_at(e, Kind::Syntax, "malformed let");
    std::unordered_map<std::string, TermId> scope;
    for (const SExpr& b : e.items[1].items) {
      if (!b.is_list || b.items.size() != 2 || b.items[0].is_list)
        fail_at(b, Kind::Syntax, "malformed let binding");
      scope[b.items[0].atom] = parse_impl(b.items[1]);
    }
    scopes_.push_back(std::move(scope));
    TermId body = parse_impl(e.items[2]);
    scopes_.pop_back();
    return body;
  }

  bool bound(const std::string& name) const {
    for (const auto& s : scopes_)
      if (s.count(name)) return true;
    return false;
  }

  Formula& f_;
  std::vector<std::unordered_map<std::string, TermId>> scopes_;
};

// (_ bvN w) literals are indexed identifiers used as atoms.
bool is_bv_literal(const SExpr& e) {
  return e.is_list && e.items.size() == 3 && e.items[0].is_atom("_") &&
         !e.items[1].is_list && e.items[1].atom.rfind("bv", 0) == 0 &&
         e.items[1].atom.size() > 2 &&
         std::isdigit(static_cast<unsigned char>(e.items[1].atom[2]));
}

}  // namespace

std::vector<SExpr> read_sexprs(std::string_view text) {
  return Reader(text).read_all();
}

Sort parse_sort(const SExpr& e) {
  try {
    if (!e.is_list) {
      if (e.atom == "Bool") return Sort::boolean();
      fail_at(e, Kind::Unsupported, "unsupported sort '" + e.atom + "'");
    }
    if (e.items.size() == 3 && e.items[0].is_atom("_") &&
        e.items[1].is_atom("BitVec")) {
      std::uint32_t w = parse_numeral(e.items[2]);
      if (w == 0) fail_at(e, Kind::Sort, "bit-vector width must be positive");
      return Sort::bitvec(w);
    }
    if (e.items.size() == 3 && e.items[0].is_atom("Array"))
      return Sort::array(parse_sort(e.items[1]), parse_sort(e.items[2]));
  } catch (const SortError& err) {
    fail_at(e, Kind::Sort, err.what());
  }
  fail_at(e, Kind::Unsupported, "unsupported sort");
}

namespace {

// Replaces every (_ bvN w) literal by its hex/binary spelling so that the
// term parser only sees atoms for constants.
void normalize_literals(SExpr& e) {
  if (!e.is_list) return;
  if (is_bv_literal(e)) {
    std::string digits = e.items[1].atom.substr(2);
    std::uint32_t w = parse_numeral(e.items[2]);
    if (w == 0) fail_at(e, Kind::Sort, "bit-vector width must be positive");
    BitVector v;
    try {
      v = BitVector::parse_decimal(digits, w);
    } catch (const std::invalid_argument& err) {
      fail_at(e, Kind::Syntax, err.what());
    }
    std::size_t line = e.line, col = e.column;
    e = SExpr{};
    e.atom = v.to_binary();
    e.line = line;
    e.column = col;
    return;
  }
  for (auto& item : e.items) normalize_literals(item);
}

bool supported_logic(const std::string& logic) {
  return logic == "QF_BV" || logic == "QF_ABV" || logic == "QF_UFBV" ||
         logic == "QF_AUFBV";
}

}  // namespace

TermId parse_term(Formula& f, const SExpr& e) {
  SExpr copy = e;
  normalize_literals(copy);
  return TermParser(f).parse(copy);
}

Formula parse_formula(std::string_view text) {
  Formula f;
  std::vector<SExpr> commands = read_sexprs(text);
  for (SExpr& cmd : commands) {
    if (!cmd.is_list || cmd.items.empty() || cmd.items[0].is_list)
      fail_at(cmd, Kind::Syntax, "expected a command");
    const std::string name = cmd.items[0].atom;
    if (name == "set-logic") {
      if (cmd.items.size() != 2) fail_at(cmd, Kind::Syntax, "bad set-logic");
      const std::string& logic = cmd.items[1].atom;
      if (!supported_logic(logic))
        fail_at(cmd.items[1], Kind::Unsupported,
                "unsupported logic '" + logic + "'");
      f.set_logic(logic);
    } else if (name == "declare-const" || name == "declare-fun") {
      bool is_fun = name == "declare-fun";
      if (cmd.items.size() != (is_fun ? 4U : 3U) || cmd.items[1].is_list)
        fail_at(cmd, Kind::Syntax, "malformed " + name);
      Sort sort = parse_sort(cmd.items.back());
      if (is_fun) {
        const SExpr& params = cmd.items[2];
        if (!params.is_list) fail_at(params, Kind::Syntax, "expected sort list");
        if (!params.items.empty()) {
          std::vector<Sort> domain;
          for (const SExpr& p : params.items) domain.push_back(parse_sort(p));
          try {
            sort = Sort::function(std::move(domain), sort);
          } catch (const SortError& err) {
            fail_at(cmd, Kind::Sort, err.what());
          }
        }
      }
      try {
        f.declare(cmd.items[1].atom, sort);
      } catch (const SortError& err) {
        fail_at(cmd, Kind::Sort, err.what());
      }
    } else if (name == "assert") {
      if (cmd.items.size() != 2) fail_at(cmd, Kind::Syntax, "malformed assert");
      TermId t = parse_term(f, cmd.items[1]);
      if (!f.terms()[t].sort.is_bool())
        fail_at(cmd.items[1], Kind::Sort, "assertion is not Bool");
      f.add_assertion(t);
    } else if (name == "check-sat" || name == "exit") {
      // accepted, no effect
    } else if (name == "define-fun" || name == "define-sort" ||
               name == "declare-sort" || name == "push" || name == "pop" ||
               name == "check-sat-assuming" || name == "reset" ||
               name == "reset-assertions" || name == "declare-datatype" ||
               name == "declare-datatypes" || name == "define-fun-rec") {
      fail_at(cmd, Kind::Unsupported, "unsupported command '" + name + "'");
    } else {
      f.warnings().push_back(std::to_string(cmd.line) + ":" +
                             std::to_string(cmd.column) +
                             ": ignored command '" + name + "'");
    }
  }
  return f;
}

}  // namespace pansampler
