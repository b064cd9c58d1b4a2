#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace pansampler {

enum class SortKind : std::uint8_t { Bool, BitVec, Array, Fun };

/// Sort of a term or declared symbol. Arrays and functions range over
/// Bool/BitVec sorts only.
class Sort {
 public:
  Sort() = default;

  static Sort boolean() { return Sort(SortKind::Bool, 1, {}); }
  static Sort bitvec(std::uint32_t width);
  static Sort array(const Sort& index, const Sort& element);
  static Sort function(std::vector<Sort> domain, const Sort& range);

  SortKind kind() const { return kind_; }
  bool is_bool() const { return kind_ == SortKind::Bool; }
  bool is_bv() const { return kind_ == SortKind::BitVec; }
  bool is_array() const { return kind_ == SortKind::Array; }
  bool is_fun() const { return kind_ == SortKind::Fun; }
  bool is_scalar() const { return is_bool() || is_bv(); }

  /// Bit width of a scalar sort; Bool counts as 1.
  std::uint32_t width() const { return width_; }

  const Sort& index() const { return params_[0]; }
  const Sort& element() const { return params_[1]; }
  std::span<const Sort> domain() const {
    return {params_.data(), params_.size() - 1};
  }
  const Sort& range() const { return params_.back(); }

  std::string to_string() const;

  friend bool operator==(const Sort&, const Sort&) = default;

 private:
  Sort(SortKind kind, std::uint32_t width, std::vector<Sort> params)
      : kind_(kind), width_(width), params_(std::move(params)) {}

  SortKind kind_ = SortKind::Bool;
  std::uint32_t width_ = 1;
  std::vector<Sort> params_;
};

}  // namespace pansampler
