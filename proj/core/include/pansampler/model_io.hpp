#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "pansampler/term.hpp"
#include "pansampler/value.hpp"

namespace pansampler {

/// SMT-LIB model block, one define-fun per declared symbol:
///   (model
///     (define-fun x () (_ BitVec 8) #x14)
///     (define-fun a () (Array (_ BitVec 2) Bool) (store ((as const ...) false) #b01 true))
///     (define-fun f ((x!0 (_ BitVec 2))) Bool (ite (= x!0 #b01) true false)))
std::string format_model(const Formula& f, const Assignment& a);

/// Model blocks separated by blank lines.
std::string format_models(const Formula& f, std::span<const Assignment> models);

/// Reads every (model ...) block of `text` against the declarations of f.
/// Symbols missing from a block take zero values. Throws ParseError.
std::vector<Assignment> parse_models(const Formula& f, std::string_view text);

/// JSON object from symbol name to value. Scalars are SMT-LIB literals;
/// arrays are {"default", "overrides": [[index, value], ...]}; functions are
/// {"default", "table": [[[args...], value], ...]}.
nlohmann::json assignment_to_json(const Formula& f, const Assignment& a);

}  // namespace pansampler
