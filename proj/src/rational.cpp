#include "dgslab/rational.hpp"

#include <cctype>
#include <cmath>
#include <stdexcept>

namespace dgslab {

Rational frac(long num, long den) {
  if (den == 0) throw std::invalid_argument("zero denominator");
  Rational q{mpz_class(num), mpz_class(den)};
  q.canonicalize();
  return q;
}

Rational parse_rational(std::string_view text) {
  std::string s(text);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  if (s.empty()) throw std::invalid_argument("empty rational");
  auto bad = [&] { return std::invalid_argument("malformed rational: '" + s + "'"); };

  const auto dot = s.find('.');
  if (dot != std::string::npos) {
    if (s.find('/') != std::string::npos) throw bad();
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    const std::size_t frac = s.size() - dot - 1;
    if (digits.empty() || digits == "-" || digits == "+") throw bad();
    mpz_class num;
    if (num.set_str(digits[0] == '+' ? digits.substr(1) : digits, 10) != 0) throw bad();
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, frac);
    Rational q(num, den);
    q.canonicalize();
    return q;
  }
  const auto slash = s.find('/');
  mpz_class num, den = 1;
  std::string a = s.substr(0, slash);
  if (!a.empty() && a[0] == '+') a.erase(a.begin());
  if (a.empty() || num.set_str(a, 10) != 0) throw bad();
  if (slash != std::string::npos) {
    std::string b = s.substr(slash + 1);
    if (b.empty() || b[0] == '-' || b[0] == '+' || den.set_str(b, 10) != 0) throw bad();
    if (den == 0) throw std::invalid_argument("zero denominator: '" + s + "'");
  }
  Rational q(num, den);
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

long double to_long_double(const Rational& q) {
  // mpq_get_d truncates to double; go through scaled integers instead so that
  // the extra long double precision is not thrown away.
  const mpz_class& num = q.get_num();
  const mpz_class& den = q.get_den();
  if (num == 0) return 0.0L;
  // Keep the 64 leading bits of numerator and denominator.
  auto lead = [](const mpz_class& z) {
    mpz_class a = abs(z);
    const long shift = static_cast<long>(mpz_sizeinbase(a.get_mpz_t(), 2)) - 64;
    if (shift > 0) a >>= static_cast<unsigned long>(shift);
    else a <<= static_cast<unsigned long>(-shift);
    const long double m = static_cast<long double>(mpz_get_ui(a.get_mpz_t()));
    return std::ldexp(m, static_cast<int>(shift));
  };
  const long double n = lead(num);
  const long double d = lead(den);
  const long double r = n / d;
  return num < 0 ? -r : r;
}

Rational rational_from_long_double(long double x, int frac_bits) {
  if (!std::isfinite(x)) throw std::invalid_argument("non-finite value");
  const long double scaled = std::ldexp(x, frac_bits);
  const long double t = std::trunc(scaled);
  // Split into two 63-bit halves to keep every bit of the long double.
  const bool neg = t < 0;
  long double a = neg ? -t : t;
  const long double base = std::ldexp(1.0L, 62);
  const long double hi = std::floor(a / base);
  const long double lo = a - hi * base;
  mpz_class num = static_cast<unsigned long>(hi);
  num <<= 62;
  num += static_cast<unsigned long>(lo);
  if (neg) num = -num;
  mpz_class den = 1;
  den <<= static_cast<unsigned long>(frac_bits);
  Rational q(num, den);
  q.canonicalize();
  return q;
}

Rational floor_q(const Rational& q) {
  mpz_class r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return Rational(r);
}

Rational ceil_q(const Rational& q) {
  mpz_class r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return Rational(r);
}

Rational abs_q(const Rational& q) { return q < 0 ? Rational(-q) : q; }

bool is_integer(const Rational& q) { return q.get_den() == 1; }

void accumulate_denominator_lcm(mpz_class& acc, const Rational& q) {
  mpz_lcm(acc.get_mpz_t(), acc.get_mpz_t(), q.get_den_mpz_t());
}

int bit_length(const Rational& q) {
  const std::size_t a = q.get_num() == 0 ? 1 : mpz_sizeinbase(q.get_num_mpz_t(), 2);
  const std::size_t b = mpz_sizeinbase(q.get_den_mpz_t(), 2);
  return static_cast<int>(std::max(a, b));
}

RationalVector RationalVector::operator+(const RationalVector& o) const {
  if (o.dimension() != dimension()) throw std::invalid_argument("dimension mismatch");
  RationalVector r(dimension());
  for (std::size_t i = 0; i < v_.size(); ++i) r.v_[i] = v_[i] + o.v_[i];
  return r;
}

RationalVector RationalVector::operator-(const RationalVector& o) const {
  if (o.dimension() != dimension()) throw std::invalid_argument("dimension mismatch");
  RationalVector r(dimension());
  for (std::size_t i = 0; i < v_.size(); ++i) r.v_[i] = v_[i] - o.v_[i];
  return r;
}

RationalVector RationalVector::operator-() const {
  RationalVector r(dimension());
  for (std::size_t i = 0; i < v_.size(); ++i) r.v_[i] = -v_[i];
  return r;
}

RationalVector RationalVector::operator*(const Rational& k) const {
  RationalVector r(dimension());
  for (std::size_t i = 0; i < v_.size(); ++i) r.v_[i] = v_[i] * k;
  return r;
}

RationalVector RationalVector::operator/(const Rational& k) const {
  if (k == 0) throw std::invalid_argument("division by zero");
  RationalVector r(dimension());
  for (std::size_t i = 0; i < v_.size(); ++i) r.v_[i] = v_[i] / k;
  return r;
}

Rational RationalVector::dot(const RationalVector& o) const {
  if (o.dimension() != dimension()) throw std::invalid_argument("dimension mismatch");
  Rational s = 0;
  for (std::size_t i = 0; i < v_.size(); ++i) s += v_[i] * o.v_[i];
  return s;
}

bool RationalVector::is_zero() const {
  for (const auto& x : v_)
    if (x != 0) return false;
  return true;
}

std::strong_ordering RationalVector::operator<=>(const RationalVector& o) const {
  const std::size_t n = std::min(v_.size(), o.v_.size());
  for (std::size_t i = 0; i < n; ++i) {
    const int c = cmp(v_[i], o.v_[i]);
    if (c < 0) return std::strong_ordering::less;
    if (c > 0) return std::strong_ordering::greater;
  }
  return v_.size() <=> o.v_.size();
}

std::string RationalVector::key() const {
  std::string s;
  for (std::size_t i = 0; i < v_.size(); ++i) {
    if (i) s += ',';
    s += to_string(v_[i]);
  }
  return s;
}

RationalVector RationalVector::parse_key(std::string_view key) {
  std::vector<Rational> out;
  std::size_t start = 0;
  while (start <= key.size()) {
    const auto comma = key.find(',', start);
    const auto end = comma == std::string_view::npos ? key.size() : comma;
    out.push_back(parse_rational(key.substr(start, end - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return RationalVector(std::move(out));
}

RationalMatrix RationalMatrix::identity(std::size_t n) {
  RationalMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

RationalMatrix RationalMatrix::from_columns(const std::vector<RationalVector>& cols) {
  const std::size_t n = cols.size();
  RationalMatrix m(n);
  for (std::size_t c = 0; c < n; ++c) {
    if (cols[c].dimension() != n) throw std::invalid_argument("basis must be square");
    for (std::size_t r = 0; r < n; ++r) m(r, c) = cols[c][r];
  }
  return m;
}

RationalVector RationalMatrix::column(std::size_t c) const {
  RationalVector v(n_);
  for (std::size_t r = 0; r < n_; ++r) v[r] = (*this)(r, c);
  return v;
}

RationalMatrix RationalMatrix::transpose() const {
  RationalMatrix t(n_);
  for (std::size_t r = 0; r < n_; ++r)
    for (std::size_t c = 0; c < n_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

RationalMatrix RationalMatrix::operator*(const RationalMatrix& o) const {
  if (o.n_ != n_) throw std::invalid_argument("dimension mismatch");
  RationalMatrix m(n_);
  for (std::size_t r = 0; r < n_; ++r)
    for (std::size_t c = 0; c < n_; ++c) {
      Rational s = 0;
      for (std::size_t k = 0; k < n_; ++k) s += (*this)(r, k) * o(k, c);
      m(r, c) = s;
    }
  return m;
}

RationalVector RationalMatrix::operator*(const RationalVector& x) const {
  if (x.dimension() != n_) throw std::invalid_argument("dimension mismatch");
  RationalVector y(n_);
  for (std::size_t r = 0; r < n_; ++r) {
    Rational s = 0;
    for (std::size_t k = 0; k < n_; ++k) s += (*this)(r, k) * x[k];
    y[r] = s;
  }
  return y;
}

Rational RationalMatrix::determinant() const {
  RationalMatrix a = *this;
  Rational det = 1;
  for (std::size_t col = 0; col < n_; ++col) {
    std::size_t piv = col;
    while (piv < n_ && a(piv, col) == 0) ++piv;
    if (piv == n_) return 0;
    if (piv != col) {
      for (std::size_t c = 0; c < n_; ++c) std::swap(a(piv, c), a(col, c));
      det = -det;
    }
    det *= a(col, col);
    for (std::size_t r = col + 1; r < n_; ++r) {
      if (a(r, col) == 0) continue;
      const Rational factor = a(r, col) / a(col, col);
      for (std::size_t c = col; c < n_; ++c) a(r, c) -= factor * a(col, c);
    }
  }
  return det;
}

RationalMatrix RationalMatrix::inverse() const {
  RationalMatrix a = *this;
  RationalMatrix inv = identity(n_);
  for (std::size_t col = 0; col < n_; ++col) {
    std::size_t piv = col;
    while (piv < n_ && a(piv, col) == 0) ++piv;
    if (piv == n_) throw std::invalid_argument("singular matrix");
    if (piv != col)
      for (std::size_t c = 0; c < n_; ++c) {
        std::swap(a(piv, c), a(col, c));
        std::swap(inv(piv, c), inv(col, c));
      }
    const Rational d = a(col, col);
    for (std::size_t c = 0; c < n_; ++c) {
      a(col, c) /= d;
      inv(col, c) /= d;
    }
    for (std::size_t r = 0; r < n_; ++r) {
      if (r == col || a(r, col) == 0) continue;
      const Rational factor = a(r, col);
      for (std::size_t c = 0; c < n_; ++c) {
        a(r, c) -= factor * a(col, c);
        inv(r, c) -= factor * inv(col, c);
      }
    }
  }
  return inv;
}

}  // namespace dgslab
