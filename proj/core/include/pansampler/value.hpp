#pragma once

#include <map>
#include <variant>
#include <vector>

#include "pansampler/bitvector.hpp"
#include "pansampler/term.hpp"

namespace pansampler {

/// Array value: a default element plus finitely many overridden cells.
struct ArrayValue {
  BitVector default_value;
  std::map<BitVector, BitVector> overrides;

  const BitVector& read(const BitVector& index) const;
  ArrayValue write(const BitVector& index, const BitVector& value) const;
};

/// Extensional equality over an index domain of 2^index_width cells.
bool arrays_equal(const ArrayValue& a, const ArrayValue& b,
                  std::uint32_t index_width);

/// Function value: a lookup table with a default for unseen argument tuples.
struct FunValue {
  BitVector default_value;
  std::map<std::vector<BitVector>, BitVector> table;

  const BitVector& apply(const std::vector<BitVector>& args) const;
};

/// Bool and BitVec values are BitVectors (Bool has width 1).
using Value = std::variant<BitVector, ArrayValue, FunValue>;

/// Zero value of a sort (false, 0, constant-0 array, constant-0 function).
Value zero_value(const Sort& sort);

/// Total map from the symbols of a formula to values, indexed by SymbolId.
class Assignment {
 public:
  Assignment() = default;
  explicit Assignment(std::vector<Value> values) : values_(std::move(values)) {}

  /// All-zero assignment over every declared symbol of f.
  static Assignment zeros(const Formula& f);

  std::size_t size() const { return values_.size(); }
  const Value& operator[](SymbolId s) const { return values_[s]; }
  Value& operator[](SymbolId s) { return values_[s]; }

  const BitVector& scalar(SymbolId s) const {
    return std::get<BitVector>(values_[s]);
  }
  void set_scalar(SymbolId s, BitVector v) { values_[s] = std::move(v); }

  const std::vector<Value>& values() const { return values_; }

  friend bool operator==(const Assignment& a, const Assignment& b);

 private:
  std::vector<Value> values_;
};

}  // namespace pansampler
