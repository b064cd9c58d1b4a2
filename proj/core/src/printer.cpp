#include "pansampler/printer.hpp"

#include <cctype>
#include <sstream>

namespace pansampler {

std::string quote_symbol(const std::string& name) {
  bool simple = !name.empty();
  for (char c : name) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) ||
          std::string_view("~!@$%^&*_-+=<>.?/").find(c) != std::string_view::npos)) {
      simple = false;
      break;
    }
  }
  if (simple && std::isdigit(static_cast<unsigned char>(name[0]))) simple = false;
  return simple ? name : "|" + name + "|";
}

namespace {

void print_rec(const Formula& f, TermId t, std::ostream& os) {
  const Node& n = f.terms()[t];
  switch (n.op) {
    case Op::Var:
      os << quote_symbol(f.symbol(n.param0).name);
      return;
    case Op::Const:
      if (n.sort.is_bool()) os << (n.value.is_true() ? "true" : "false");
      else os << n.value.to_smtlib();
      return;
    case Op::Apply:
      if (n.children.empty()) {
        os << quote_symbol(f.symbol(n.param0).name);
        return;
      }
      os << '(' << quote_symbol(f.symbol(n.param0).name);
      break;
    case Op::Extract:
      os << "((_ extract " << n.param0 << ' ' << n.param1 << ')';
      break;
    case Op::ZeroExtend:
    case Op::SignExtend:
      os << "((_ " << op_name(n.op) << ' ' << n.param0 << ')';
      break;
    default:
      os << '(' << op_name(n.op);
      break;
  }
  for (TermId c : n.children) {
    os << ' ';
    print_rec(f, c, os);
  }
  os << ')';
}

}  // namespace

std::string print_term(const Formula& f, TermId t) {
  std::ostringstream os;
  print_rec(f, t, os);
  return os.str();
}

std::string print_formula(const Formula& f) {
  std::ostringstream os;
  if (!f.logic().empty()) os << "(set-logic " << f.logic() << ")\n";
  for (const Symbol& s : f.symbols()) {
    os << "(declare-fun " << quote_symbol(s.name) << ' ';
    if (s.sort.is_fun()) {
      os << s.sort.to_string();
    } else {
      os << "() " << s.sort.to_string();
    }
    os << ")\n";
  }
  for (TermId a : f.assertions()) os << "(assert " << print_term(f, a) << ")\n";
  os << "(check-sat)\n";
  return os.str();
}

}  // namespace pansampler
