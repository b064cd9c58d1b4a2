#include "pansampler/model_io.hpp"

#include <map>
#include <sstream>

#include "pansampler/parser.hpp"
#include "pansampler/printer.hpp"

namespace pansampler {

namespace {

std::string literal(const Sort& sort, const BitVector& v) {
  if (sort.is_bool()) return v.is_true() ? "true" : "false";
  return v.to_smtlib();
}

std::string param_name(std::size_t i) { return "x!" + std::to_string(i); }

std::string format_value(const Sort& sort, const Value& value) {
  if (sort.is_scalar()) return literal(sort, std::get<BitVector>(value));
  if (sort.is_array()) {
    const auto& arr = std::get<ArrayValue>(value);
    std::string body = "((as const " + sort.to_string() + ") " +
                       literal(sort.element(), arr.default_value) + ")";
    for (const auto& [idx, v] : arr.overrides)
      body = "(store " + body + " " + literal(sort.index(), idx) + " " +
             literal(sort.element(), v) + ")";
    return body;
  }
  const auto& fun = std::get<FunValue>(value);
  const auto domain = sort.domain();
  if (domain.empty()) {
    auto it = fun.table.find({});
    return literal(sort.range(), it == fun.table.end() ? fun.default_value : it->second);
  }
  std::string body = literal(sort.range(), fun.default_value);
  for (auto it = fun.table.rbegin(); it != fun.table.rend(); ++it) {
    std::string cond;
    for (std::size_t i = 0; i < domain.size(); ++i) {
      std::string eq = "(= " + param_name(i) + " " + literal(domain[i], it->first[i]) + ")";
      cond += (i ? " " : "") + eq;
    }
    if (domain.size() > 1) cond = "(and " + cond + ")";
    body = "(ite " + cond + " " + literal(sort.range(), it->second) + " " + body + ")";
  }
  return body;
}

[[noreturn]] void fail(const SExpr& e, const std::string& msg) {
  throw ParseError(ParseError::Kind::Syntax, e.line, e.column, msg);
}

BitVector read_literal(const SExpr& e, const Sort& sort) {
  Formula scratch;
  TermId t = parse_term(scratch, e);
  const Node& n = scratch.terms()[t];
  if (n.op != Op::Const || n.sort != sort)
    throw ParseError(ParseError::Kind::Sort, e.line, e.column,
                     "expected a literal of sort " + sort.to_string());
  return n.value;
}

ArrayValue read_array(const SExpr& e, const Sort& sort) {
  if (e.is_list && e.items.size() == 4 && e.items[0].is_atom("store")) {
    ArrayValue base = read_array(e.items[1], sort);
    base.overrides[read_literal(e.items[2], sort.index())] =
        read_literal(e.items[3], sort.element());
    return base;
  }
  if (e.is_list && e.items.size() == 2 && e.items[0].is_list &&
      e.items[0].items.size() == 3 && e.items[0].items[0].is_atom("as") &&
      e.items[0].items[1].is_atom("const")) {
    if (parse_sort(e.items[0].items[2]) != sort) fail(e, "constant array sort mismatch");
    return ArrayValue{read_literal(e.items[1], sort.element()), {}};
  }
  fail(e, "expected a store chain over a constant array");
}

FunValue read_function(const SExpr& params, SExpr body, const Sort& sort) {
  const auto domain = sort.domain();
  if (!params.is_list || params.items.size() != domain.size())
    fail(params, "parameter list does not match the declaration");
  std::map<std::string, std::size_t> position;
  for (std::size_t i = 0; i < params.items.size(); ++i) {
    const SExpr& p = params.items[i];
    if (!p.is_list || p.items.size() != 2 || p.items[0].is_list)
      fail(p, "malformed parameter");
    if (parse_sort(p.items[1]) != domain[i]) fail(p, "parameter sort mismatch");
    position[p.items[0].atom] = i;
  }
  FunValue fun;
  while (body.is_list && body.items.size() == 4 && body.items[0].is_atom("ite")) {
    const SExpr& cond = body.items[1];
    std::vector<const SExpr*> eqs;
    if (cond.is_list && !cond.items.empty() && cond.items[0].is_atom("and")) {
      for (std::size_t i = 1; i < cond.items.size(); ++i) eqs.push_back(&cond.items[i]);
    } else {
      eqs.push_back(&cond);
    }
    if (eqs.size() != domain.size()) fail(cond, "condition must fix every argument");
    std::vector<BitVector> args(domain.size());
    std::vector<char> seen(domain.size(), 0);
    for (const SExpr* eq : eqs) {
      if (!eq->is_list || eq->items.size() != 3 || !eq->items[0].is_atom("=") ||
          eq->items[1].is_list || !position.count(eq->items[1].atom))
        fail(*eq, "expected (= parameter literal)");
      std::size_t i = position[eq->items[1].atom];
      args[i] = read_literal(eq->items[2], domain[i]);
      seen[i] = 1;
    }
    for (char s : seen)
      if (!s) fail(cond, "condition must fix every argument");
    fun.table.emplace(std::move(args), read_literal(body.items[2], sort.range()));
    SExpr rest = body.items[3];
    body = std::move(rest);
  }
  fun.default_value = read_literal(body, sort.range());
  return fun;
}

}  // namespace

std::string format_model(const Formula& f, const Assignment& a) {
  std::ostringstream os;
  os << "(model\n";
  for (SymbolId s = 0; s < f.symbols().size(); ++s) {
    const Symbol& sym = f.symbol(s);
    os << "  (define-fun " << quote_symbol(sym.name) << " (";
    if (sym.sort.is_fun()) {
      const auto domain = sym.sort.domain();
      for (std::size_t i = 0; i < domain.size(); ++i)
        os << (i ? " " : "") << '(' << param_name(i) << ' ' << domain[i].to_string() << ')';
      os << ") " << sym.sort.range().to_string();
    } else {
      os << ") " << sym.sort.to_string();
    }
    os << ' ' << format_value(sym.sort, a[s]) << ")\n";
  }
  os << ")\n";
  return os.str();
}

std::string format_models(const Formula& f, std::span<const Assignment> models) {
  std::string out;
  for (std::size_t i = 0; i < models.size(); ++i) {
    if (i) out += '\n';
    out += format_model(f, models[i]);
  }
  return out;
}

std::vector<Assignment> parse_models(const Formula& f, std::string_view text) {
  std::vector<Assignment> out;
  for (const SExpr& block : read_sexprs(text)) {
    if (!block.is_list || block.items.empty() || !block.items[0].is_atom("model"))
      fail(block, "expected a (model ...) block");
    Assignment a = Assignment::zeros(f);
    for (std::size_t k = 1; k < block.items.size(); ++k) {
      const SExpr& def = block.items[k];
      if (!def.is_list || def.items.size() != 5 || !def.items[0].is_atom("define-fun") ||
          def.items[1].is_list)
        fail(def, "expected (define-fun name params sort value)");
      auto sym = f.find_symbol(def.items[1].atom);
      if (!sym)
        throw ParseError(ParseError::Kind::UndeclaredSymbol, def.line, def.column,
                         "unknown symbol '" + def.items[1].atom + "'");
      const Sort& sort = f.symbol(*sym).sort;
      if (sort.is_fun()) {
        if (parse_sort(def.items[3]) != sort.range()) fail(def, "range sort mismatch");
        a[*sym] = read_function(def.items[2], def.items[4], sort);
        continue;
      }
      if (!def.items[2].is_list || !def.items[2].items.empty())
        fail(def, "constants take no parameters");
      if (parse_sort(def.items[3]) != sort) fail(def, "sort mismatch");
      if (sort.is_array()) a[*sym] = read_array(def.items[4], sort);
      else a[*sym] = read_literal(def.items[4], sort);
    }
    out.push_back(std::move(a));
  }
  return out;
}

nlohmann::json assignment_to_json(const Formula& f, const Assignment& a) {
  nlohmann::json out = nlohmann::json::object();
  for (SymbolId s = 0; s < f.symbols().size(); ++s) {
    const Symbol& sym = f.symbol(s);
    if (sym.sort.is_scalar()) {
      out[sym.name] = literal(sym.sort, a.scalar(s));
    } else if (sym.sort.is_array()) {
      const auto& arr = std::get<ArrayValue>(a[s]);
      nlohmann::json overrides = nlohmann::json::array();
      for (const auto& [idx, v] : arr.overrides)
        overrides.push_back({literal(sym.sort.index(), idx), literal(sym.sort.element(), v)});
      out[sym.name] = {{"default", literal(sym.sort.element(), arr.default_value)},
                       {"overrides", overrides}};
    } else {
      const auto& fun = std::get<FunValue>(a[s]);
      const auto domain = sym.sort.domain();
      nlohmann::json table = nlohmann::json::array();
      for (const auto& [args, v] : fun.table) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t i = 0; i < args.size(); ++i) row.push_back(literal(domain[i], args[i]));
        table.push_back({row, literal(sym.sort.range(), v)});
      }
      out[sym.name] = {{"default", literal(sym.sort.range(), fun.default_value)},
                       {"table", table}};
    }
  }
  return out;
}

}  // namespace pansampler
