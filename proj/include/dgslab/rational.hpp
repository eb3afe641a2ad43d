#ifndef DGSLAB_RATIONAL_HPP_
#define DGSLAB_RATIONAL_HPP_

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace dgslab {

// Kept in lowest terms with a positive denominator. gmpxx's two-argument
// constructor does not reduce, so build fractions with frac().
using Rational = mpq_class;

Rational frac(long num, long den);

// Accepts "a", "a/b" and plain decimals such as "-0.25".
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);

long double to_long_double(const Rational& q);
// Closest dyadic rational with the given number of fractional bits, rounded
// toward zero.
Rational rational_from_long_double(long double x, int frac_bits = 60);

Rational floor_q(const Rational& q);
Rational ceil_q(const Rational& q);
Rational abs_q(const Rational& q);
bool is_integer(const Rational& q);
// acc := lcm(acc, denominator of q).
void accumulate_denominator_lcm(mpz_class& acc, const Rational& q);
// Number of bits of max(|numerator|, denominator); zero counts as one bit.
int bit_length(const Rational& q);

class RationalVector {
 public:
  RationalVector() = default;
  explicit RationalVector(std::size_t n) : v_(n) {}
  RationalVector(std::initializer_list<Rational> values) : v_(values) {}
  explicit RationalVector(std::vector<Rational> values) : v_(std::move(values)) {}

  std::size_t dimension() const { return v_.size(); }
  Rational& operator[](std::size_t i) { return v_[i]; }
  const Rational& operator[](std::size_t i) const { return v_[i]; }
  auto begin() const { return v_.begin(); }
  auto end() const { return v_.end(); }
  const std::vector<Rational>& values() const { return v_; }

  RationalVector operator+(const RationalVector& o) const;
  RationalVector operator-(const RationalVector& o) const;
  RationalVector operator-() const;
  RationalVector operator*(const Rational& k) const;
  RationalVector operator/(const Rational& k) const;

  Rational dot(const RationalVector& o) const;
  Rational norm_sq() const { return dot(*this); }
  bool is_zero() const;

  bool operator==(const RationalVector& o) const { return v_ == o.v_; }
  // Lexicographic on coordinates.
  std::strong_ordering operator<=>(const RationalVector& o) const;

  // Comma separated "p/q" entries; used as a histogram key.
  std::string key() const;
  static RationalVector parse_key(std::string_view key);

 private:
  std::vector<Rational> v_;
};

// Square matrix in row-major order.
class RationalMatrix {
 public:
  RationalMatrix() = default;
  explicit RationalMatrix(std::size_t n) : n_(n), a_(n * n) {}
  static RationalMatrix identity(std::size_t n);
  static RationalMatrix from_columns(const std::vector<RationalVector>& cols);

  std::size_t size() const { return n_; }
  Rational& operator()(std::size_t r, std::size_t c) { return a_[r * n_ + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const { return a_[r * n_ + c]; }

  RationalVector column(std::size_t c) const;
  RationalMatrix transpose() const;
  RationalMatrix operator*(const RationalMatrix& o) const;
  RationalVector operator*(const RationalVector& x) const;
  bool operator==(const RationalMatrix& o) const { return n_ == o.n_ && a_ == o.a_; }

  // Gaussian elimination over Q. Returns zero for singular matrices.
  Rational determinant() const;
  // Throws std::invalid_argument when singular.
  RationalMatrix inverse() const;

 private:
  std::size_t n_ = 0;
  std::vector<Rational> a_;
};

}  // namespace dgslab

#endif  // DGSLAB_RATIONAL_HPP_
