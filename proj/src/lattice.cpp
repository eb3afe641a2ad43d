#include "dgslab/lattice.hpp"

#include <stdexcept>

namespace dgslab {

namespace {

Rational pow2(long e) {
  mpz_class p = 1;
  if (e >= 0) {
    p <<= static_cast<unsigned long>(e);
    return Rational(p);
  }
  p <<= static_cast<unsigned long>(-e);
  return Rational(mpz_class(1), p);  // already in lowest terms
}

int compute_m(const RationalMatrix& b) {
  const std::size_t n = b.size();
  int m = 1;
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) m = std::max(m, bit_length(b(r, c)));
  for (std::size_t c = 0; c < n; ++c) {
    const RationalVector col = b.column(c);
    const Rational norm_sq = col.norm_sq();
    while (norm_sq > pow2(2L * m)) ++m;
    mpz_class den = 1;
    for (const auto& x : col) accumulate_denominator_lcm(den, x);
    while (Rational(den) > pow2(m)) ++m;
  }
  return m;
}

}  // namespace

Basis::Basis(std::vector<RationalVector> columns)
    : Basis(RationalMatrix::from_columns(columns)) {}

Basis::Basis(const RationalMatrix& columns) {
  if (columns.size() == 0) throw std::invalid_argument("empty basis");
  auto impl = std::make_shared<Impl>();
  impl->matrix = columns;
  impl->det = columns.determinant();
  if (impl->det == 0) throw std::invalid_argument("basis is not full rank");
  impl->inverse = columns.inverse();
  impl->m = compute_m(columns);
  impl_ = std::move(impl);
}

Basis Basis::identity(std::size_t n) { return Basis(RationalMatrix::identity(n)); }

Basis Basis::diagonal(const std::vector<Rational>& entries) {
  RationalMatrix m(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) m(i, i) = entries[i];
  return Basis(m);
}

Basis Basis::scaled_down(const Rational& k) const {
  if (k <= 0) throw std::invalid_argument("scale must be positive");
  RationalMatrix m = matrix();
  for (std::size_t r = 0; r < m.size(); ++r)
    for (std::size_t c = 0; c < m.size(); ++c) m(r, c) /= k;
  return Basis(m);
}

bool Basis::operator==(const Basis& o) const {
  if (impl_ == o.impl_) return true;
  if (!impl_ || !o.impl_) return false;
  return impl_->matrix == o.impl_->matrix;
}

ShiftedLattice::ShiftedLattice(Basis b, RationalVector t, std::string label)
    : basis(std::move(b)), shift(std::move(t)), name(std::move(label)) {
  if (shift.dimension() != basis.dimension())
    throw std::invalid_argument("shift dimension does not match basis");
}

ShiftedLattice::ShiftedLattice(Basis b, std::string label)
    : basis(std::move(b)), shift(basis.dimension()), name(std::move(label)) {}

ShiftedLattice ShiftedLattice::scaled_down(const Rational& k) const {
  return ShiftedLattice(basis.scaled_down(k), shift / k, name);
}

RationalVector coords(const Basis& b, const RationalVector& x) {
  if (x.dimension() != b.dimension()) throw std::invalid_argument("dimension mismatch");
  return b.inverse() * x;
}

bool is_lattice_member(const Basis& b, const RationalVector& x) {
  for (const auto& c : coords(b, x))
    if (!is_integer(c)) return false;
  return true;
}

bool is_primitive(const Basis& b, const RationalVector& x) {
  if (x.is_zero()) throw std::invalid_argument("zero vector has no primitivity");
  const RationalVector c = coords(b, x);
  mpz_class g = 0;
  for (const auto& ci : c) {
    if (!is_integer(ci)) throw std::invalid_argument("vector is not a lattice member");
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), ci.get_num_mpz_t());
  }
  return g == 1;
}

BitLengthBounds bit_length_bounds(const Basis& b) {
  const long n = static_cast<long>(b.dimension());
  const long m = b.bit_length_m();
  return BitLengthBounds{pow2(-n * m), pow2(m), pow2(-n * m - 1), Rational(n) * pow2(m)};
}

}  // namespace dgslab
