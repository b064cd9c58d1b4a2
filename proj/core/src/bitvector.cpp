#include "pansampler/bitvector.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace pansampler {

namespace {

std::size_t word_count(std::uint32_t width) { return (width + 63) / 64; }

}  // namespace

BitVector::BitVector(std::uint32_t width)
    : width_(width), words_(word_count(width), 0) {}

BitVector BitVector::from_u64(std::uint32_t width, std::uint64_t value) {
  BitVector v(width);
  if (!v.words_.empty()) v.words_[0] = value;
  v.clear_unused();
  return v;
}

BitVector BitVector::ones(std::uint32_t width) {
  BitVector v(width);
  std::fill(v.words_.begin(), v.words_.end(), ~std::uint64_t{0});
  v.clear_unused();
  return v;
}

BitVector BitVector::parse_binary(std::string_view digits) {
  if (digits.empty()) throw std::invalid_argument("empty binary literal");
  BitVector v(static_cast<std::uint32_t>(digits.size()));
  for (std::size_t k = 0; k < digits.size(); ++k) {
    char c = digits[digits.size() - 1 - k];
    if (c != '0' && c != '1')
      throw std::invalid_argument("bad binary digit in literal");
    v.set_bit(static_cast<std::uint32_t>(k), c == '1');
  }
  return v;
}

BitVector BitVector::parse_hex(std::string_view digits) {
  if (digits.empty()) throw std::invalid_argument("empty hex literal");
  BitVector v(static_cast<std::uint32_t>(digits.size() * 4));
  for (std::size_t k = 0; k < digits.size(); ++k) {
    char c = digits[digits.size() - 1 - k];
    unsigned nibble;
    if (c >= '0' && c <= '9') nibble = c - '0';
    else if (c >= 'a' && c <= 'f') nibble = c - 'a' + 10;
    else if (c >= 'A' && c <= 'F') nibble = c - 'A' + 10;
    else throw std::invalid_argument("bad hex digit in literal");
    for (unsigned b = 0; b < 4; ++b)
      v.set_bit(static_cast<std::uint32_t>(k * 4 + b), (nibble >> b) & 1U);
  }
  return v;
}

BitVector BitVector::parse_decimal(std::string_view digits,
                                   std::uint32_t width) {
  if (digits.empty()) throw std::invalid_argument("empty decimal literal");
  BitVector v(width);
  BitVector ten = from_u64(width, 10);
  for (char c : digits) {
    if (c < '0' || c > '9')
      throw std::invalid_argument("bad decimal digit in literal");
    v = v.mul(ten).add(from_u64(width, static_cast<std::uint64_t>(c - '0')));
  }
  return v;
}

void BitVector::set_bit(std::uint32_t i, bool value) {
  std::uint64_t mask = std::uint64_t{1} << (i % 64);
  if (value) words_[i / 64] |= mask;
  else words_[i / 64] &= ~mask;
}

void BitVector::clear_unused() {
  if (width_ % 64 != 0 && !words_.empty())
    words_.back() &= (std::uint64_t{1} << (width_ % 64)) - 1;
}

bool BitVector::is_zero() const {
  return std::all_of(words_.begin(), words_.end(),
                     [](std::uint64_t w) { return w == 0; });
}

std::uint32_t BitVector::popcount() const {
  std::uint32_t n = 0;
  for (auto w : words_) n += static_cast<std::uint32_t>(std::popcount(w));
  return n;
}

BitVector BitVector::operator~() const {
  BitVector r(*this);
  for (auto& w : r.words_) w = ~w;
  r.clear_unused();
  return r;
}

BitVector BitVector::operator&(const BitVector& rhs) const {
  BitVector r(*this);
  for (std::size_t i = 0; i < r.words_.size(); ++i) r.words_[i] &= rhs.words_[i];
  return r;
}

BitVector BitVector::operator|(const BitVector& rhs) const {
  BitVector r(*this);
  for (std::size_t i = 0; i < r.words_.size(); ++i) r.words_[i] |= rhs.words_[i];
  return r;
}

BitVector BitVector::operator^(const BitVector& rhs) const {
  BitVector r(*this);
  for (std::size_t i = 0; i < r.words_.size(); ++i) r.words_[i] ^= rhs.words_[i];
  return r;
}

BitVector BitVector::add(const BitVector& rhs) const {
  BitVector r(width_);
  unsigned __int128 carry = 0;
  for (std::size_t i = 0; i < words_.size(); ++i) {
    unsigned __int128 s =
        static_cast<unsigned __int128>(words_[i]) + rhs.words_[i] + carry;
    r.words_[i] = static_cast<std::uint64_t>(s);
    carry = s >> 64;
  }
  r.clear_unused();
  return r;
}

BitVector BitVector::neg() const {
  return (~*this).add(from_u64(width_, 1));
}

BitVector BitVector::sub(const BitVector& rhs) const { return add(rhs.neg()); }

BitVector BitVector::mul(const BitVector& rhs) const {
  const std::size_t n = words_.size();
  BitVector r(width_);
  for (std::size_t i = 0; i < n; ++i) {
    unsigned __int128 carry = 0;
    for (std::size_t j = 0; i + j < n; ++j) {
      unsigned __int128 cur = static_cast<unsigned __int128>(words_[i]) *
                                  rhs.words_[j] +
                              r.words_[i + j] + carry;
      r.words_[i + j] = static_cast<std::uint64_t>(cur);
      carry = cur >> 64;
    }
  }
  r.clear_unused();
  return r;
}

namespace {

// Restoring long division; divisor must be nonzero.
void divide(const BitVector& num, const BitVector& den, BitVector& quot,
            BitVector& rem) {
  const std::uint32_t w = num.width();
  quot = BitVector(w);
  rem = BitVector(w);
  BitVector one = BitVector::from_u64(w, 1);
  for (std::uint32_t i = w; i-- > 0;) {
    // rem = (rem << 1) | num[i]; the shifted-out bit only matters when set.
    bool overflow = rem.msb();
    rem = rem.shl(one);
    rem.set_bit(0, num.bit(i));
    if (overflow || !rem.ult(den)) {
      rem = rem.sub(den);
      quot.set_bit(i, true);
    }
  }
}

}  // namespace

BitVector BitVector::udiv(const BitVector& rhs) const {
  if (rhs.is_zero()) return ones(width_);
  BitVector q, r;
  divide(*this, rhs, q, r);
  return q;
}

BitVector BitVector::urem(const BitVector& rhs) const {
  if (rhs.is_zero()) return *this;
  BitVector q, r;
  divide(*this, rhs, q, r);
  return r;
}

std::uint64_t BitVector::shift_amount(const BitVector& amount) const {
  for (std::size_t i = 1; i < amount.words_.size(); ++i)
    if (amount.words_[i] != 0) return width_;
  std::uint64_t a = amount.low_u64();
  return a >= width_ ? width_ : a;
}

BitVector BitVector::shl(const BitVector& amount) const {
  std::uint64_t s = shift_amount(amount);
  BitVector r(width_);
  for (std::uint64_t i = s; i < width_; ++i)
    r.set_bit(static_cast<std::uint32_t>(i),
              bit(static_cast<std::uint32_t>(i - s)));
  return r;
}

BitVector BitVector::lshr(const BitVector& amount) const {
  std::uint64_t s = shift_amount(amount);
  BitVector r(width_);
  for (std::uint64_t i = 0; i + s < width_; ++i)
    r.set_bit(static_cast<std::uint32_t>(i),
              bit(static_cast<std::uint32_t>(i + s)));
  return r;
}

BitVector BitVector::ashr(const BitVector& amount) const {
  std::uint64_t s = shift_amount(amount);
  bool sign = msb();
  BitVector r(width_);
  for (std::uint64_t i = 0; i < width_; ++i) {
    std::uint64_t src = i + s;
    r.set_bit(static_cast<std::uint32_t>(i),
              src < width_ ? bit(static_cast<std::uint32_t>(src)) : sign);
  }
  return r;
}

bool BitVector::ult(const BitVector& rhs) const {
  for (std::size_t i = words_.size(); i-- > 0;) {
    if (words_[i] != rhs.words_[i]) return words_[i] < rhs.words_[i];
  }
  return false;
}

bool BitVector::slt(const BitVector& rhs) const {
  bool sa = msb(), sb = rhs.msb();
  if (sa != sb) return sa;
  return ult(rhs);
}

BitVector BitVector::concat(const BitVector& low) const {
  BitVector r(width_ + low.width_);
  for (std::uint32_t i = 0; i < low.width_; ++i) r.set_bit(i, low.bit(i));
  for (std::uint32_t i = 0; i < width_; ++i) r.set_bit(low.width_ + i, bit(i));
  return r;
}

BitVector BitVector::extract(std::uint32_t hi, std::uint32_t lo) const {
  BitVector r(hi - lo + 1);
  for (std::uint32_t i = lo; i <= hi; ++i) r.set_bit(i - lo, bit(i));
  return r;
}

BitVector BitVector::zero_extend(std::uint32_t extra) const {
  BitVector r(width_ + extra);
  for (std::size_t i = 0; i < words_.size(); ++i) r.words_[i] = words_[i];
  return r;
}

BitVector BitVector::sign_extend(std::uint32_t extra) const {
  BitVector r = zero_extend(extra);
  if (msb())
    for (std::uint32_t i = width_; i < width_ + extra; ++i) r.set_bit(i, true);
  return r;
}

std::uint32_t BitVector::hamming(const BitVector& rhs) const {
  return (*this ^ rhs).popcount();
}

std::string BitVector::to_binary() const {
  std::string s = "#b";
  for (std::uint32_t i = width_; i-- > 0;) s.push_back(bit(i) ? '1' : '0');
  return s;
}

std::string BitVector::to_hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string s = "#x";
  for (std::uint32_t n = width_ / 4; n-- > 0;) {
    unsigned nibble = 0;
    for (unsigned b = 0; b < 4; ++b) nibble |= unsigned{bit(n * 4 + b)} << b;
    s.push_back(kDigits[nibble]);
  }
  return s;
}

std::string BitVector::to_smtlib() const {
  return width_ % 4 == 0 ? to_hex() : to_binary();
}

std::string BitVector::to_decimal() const {
  if (is_zero()) return "0";
  std::string digits;
  BitVector cur = *this;
  // Widen so that 10 is representable for narrow vectors.
  if (cur.width_ < 8) cur = cur.zero_extend(8 - cur.width_);
  BitVector ten = from_u64(cur.width_, 10);
  while (!cur.is_zero()) {
    digits.push_back(static_cast<char>('0' + cur.urem(ten).low_u64()));
    cur = cur.udiv(ten);
  }
  std::reverse(digits.begin(), digits.end());
  return digits;
}

bool operator<(const BitVector& a, const BitVector& b) {
  if (a.width_ != b.width_) return a.width_ < b.width_;
  return a.ult(b);
}

std::size_t BitVector::hash() const {
  std::size_t h = width_ * 0x9e3779b97f4a7c15ULL;
  for (auto w : words_) h = (h ^ w) * 0x100000001b3ULL + (h >> 29);
  return h;
}

}  // namespace pansampler
