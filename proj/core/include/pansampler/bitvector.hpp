#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/container/small_vector.hpp>

namespace pansampler {

/// Fixed-width bit-vector value with SMT-LIB FixedSizeBitVectors semantics.
///
/// Words are little-endian (word 0 holds bits 0..63). Bits at or above
/// width() are always zero. Booleans are represented as width-1 vectors.
class BitVector {
 public:
  using Words = boost::container::small_vector<std::uint64_t, 2>;

  BitVector() = default;
  explicit BitVector(std::uint32_t width);

  static BitVector from_u64(std::uint32_t width, std::uint64_t value);
  static BitVector from_bool(bool value) { return from_u64(1, value ? 1 : 0); }
  static BitVector ones(std::uint32_t width);

  /// Parses "#b0101", "#xdead" or a decimal digit string of the given width.
  /// Throws std::invalid_argument on malformed input.
  static BitVector parse_binary(std::string_view digits);
  static BitVector parse_hex(std::string_view digits);
  static BitVector parse_decimal(std::string_view digits, std::uint32_t width);

  std::uint32_t width() const { return width_; }
  const Words& words() const { return words_; }

  bool bit(std::uint32_t i) const {
    return (words_[i / 64] >> (i % 64)) & 1U;
  }
  void set_bit(std::uint32_t i, bool value);

  bool is_zero() const;
  bool is_true() const { return width_ == 1 && (words_[0] & 1U); }
  bool msb() const { return width_ > 0 && bit(width_ - 1); }
  std::uint64_t low_u64() const { return words_.empty() ? 0 : words_[0]; }
  std::uint32_t popcount() const;

  BitVector operator~() const;
  BitVector operator&(const BitVector& rhs) const;
  BitVector operator|(const BitVector& rhs) const;
  BitVector operator^(const BitVector& rhs) const;

  BitVector add(const BitVector& rhs) const;
  BitVector sub(const BitVector& rhs) const;
  BitVector neg() const;
  BitVector mul(const BitVector& rhs) const;
  BitVector udiv(const BitVector& rhs) const;
  BitVector urem(const BitVector& rhs) const;
  BitVector shl(const BitVector& amount) const;
  BitVector lshr(const BitVector& amount) const;
  BitVector ashr(const BitVector& amount) const;

  bool ult(const BitVector& rhs) const;
  bool ule(const BitVector& rhs) const { return !rhs.ult(*this); }
  bool slt(const BitVector& rhs) const;
  bool sle(const BitVector& rhs) const { return !rhs.slt(*this); }

  /// this is the high part, low is the low part.
  BitVector concat(const BitVector& low) const;
  BitVector extract(std::uint32_t hi, std::uint32_t lo) const;
  BitVector zero_extend(std::uint32_t extra) const;
  BitVector sign_extend(std::uint32_t extra) const;

  /// Number of differing bits; widths must agree.
  std::uint32_t hamming(const BitVector& rhs) const;

  std::string to_binary() const;  // "#b..." without width loss
  std::string to_hex() const;     // "#x..."; width must be a multiple of 4
  /// SMT-LIB literal: hex when the width is a multiple of 4, binary otherwise.
  std::string to_smtlib() const;
  std::string to_decimal() const;

  friend bool operator==(const BitVector& a, const BitVector& b) {
    return a.width_ == b.width_ && a.words_ == b.words_;
  }
  /// Orders by width, then unsigned magnitude.
  friend bool operator<(const BitVector& a, const BitVector& b);

  std::size_t hash() const;

 private:
  void clear_unused();
  std::uint64_t shift_amount(const BitVector& amount) const;

  std::uint32_t width_ = 0;
  Words words_;
};

struct BitVectorHash {
  std::size_t operator()(const BitVector& v) const { return v.hash(); }
};

}  // namespace pansampler
