#include "pansampler/cnf.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace pansampler {

void Cnf::add_clause(std::vector<int> lits) {
  std::sort(lits.begin(), lits.end(), [](int a, int b) {
    int va = std::abs(a), vb = std::abs(b);
    return va != vb ? va < vb : a < b;
  });
  lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
  for (std::size_t i = 1; i < lits.size(); ++i)
    if (lits[i] == -lits[i - 1]) return;
  for (int l : lits)
    num_vars = std::max(num_vars, static_cast<std::uint32_t>(std::abs(l)));
  clauses.push_back(std::move(lits));
}

bool satisfies(const Cnf& cnf, const Model& m) {
  if (m.size() < cnf.num_vars) return false;
  for (const auto& c : cnf.clauses) {
    bool sat = false;
    for (int l : c)
      if (lit_value(m, l)) {
        sat = true;
        break;
      }
    if (!sat) return false;
  }
  return true;
}

std::string to_dimacs(const Cnf& cnf) {
  std::ostringstream os;
  os << "p cnf " << cnf.num_vars << ' ' << cnf.clauses.size() << '\n';
  for (const auto& c : cnf.clauses) {
    for (int l : c) os << l << ' ';
    os << "0\n";
  }
  return os.str();
}

Cnf parse_dimacs(std::string_view text) {
  std::istringstream in{std::string(text)};
  Cnf cnf;
  std::string line;
  bool header = false;
  std::size_t declared_clauses = 0;
  std::vector<int> current;
  while (std::getline(in, line)) {
    std::size_t p = line.find_first_not_of(" \t\r");
    if (p == std::string::npos || line[p] == 'c' || line[p] == '%') continue;
    std::istringstream ls(line);
    if (line[p] == 'p') {
      std::string pp, fmt;
      std::uint32_t vars = 0;
      ls >> pp >> fmt >> vars >> declared_clauses;
      if (fmt != "cnf" || !ls) throw std::runtime_error("bad DIMACS header");
      cnf.num_vars = vars;
      header = true;
      continue;
    }
    if (!header) throw std::runtime_error("DIMACS clause before header");
    long long lit;
    while (ls >> lit) {
      if (lit == 0) {
        cnf.add_clause(std::move(current));
        current.clear();
      } else {
        if (static_cast<unsigned long long>(lit < 0 ? -lit : lit) > cnf.num_vars)
          throw std::runtime_error("DIMACS literal exceeds declared variables");
        current.push_back(static_cast<int>(lit));
      }
    }
    if (!ls.eof()) throw std::runtime_error("bad DIMACS literal");
  }
  if (!current.empty()) cnf.add_clause(std::move(current));
  return cnf;
}

std::string model_line(const Model& m) {
  std::ostringstream os;
  os << 'v';
  for (std::size_t i = 0; i < m.size(); ++i)
    os << ' ' << (m[i] ? "" : "-") << i + 1;
  os << " 0";
  return os.str();
}

}  // namespace pansampler
