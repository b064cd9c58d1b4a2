#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "pansampler/parser.hpp"
#include "pansampler/term.hpp"
#include "pansampler/value.hpp"

namespace pstest {

inline std::filesystem::path fixture(const std::string& name) {
  return std::filesystem::path(FIXTURE_DIR) / name;
}

inline std::string read_text(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline pansampler::Formula load_fixture(const std::string& name) {
  return pansampler::parse_formula(read_text(fixture(name)));
}

inline pansampler::SymbolId sym(const pansampler::Formula& f, const std::string& name) {
  return *f.find_symbol(name);
}

/// Assignment with the named scalars set and everything else zero.
inline pansampler::Assignment with_scalars(
    const pansampler::Formula& f,
    std::initializer_list<std::pair<const char*, std::uint64_t>> values) {
  pansampler::Assignment a = pansampler::Assignment::zeros(f);
  for (const auto& [name, v] : values) {
    pansampler::SymbolId s = sym(f, name);
    a.set_scalar(s, pansampler::BitVector::from_u64(f.symbol(s).sort.width(), v));
  }
  return a;
}

}  // namespace pstest
