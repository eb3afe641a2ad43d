#include "dgslab/sparsifier.hpp"

#include <limits>
#include <stdexcept>

#include "dgslab/primes.hpp"

namespace dgslab {

namespace {

std::uint64_t inverse_mod(std::uint64_t a, std::uint64_t p) {
  // p is prime, so a^{p-2} = a^{-1}.
  unsigned __int128 r = 1, base = a % p;
  std::uint64_t e = p - 2;
  while (e) {
    if (e & 1) r = r * base % p;
    base = base * base % p;
    e >>= 1;
  }
  return static_cast<std::uint64_t>(r);
}

std::uint64_t reduce(const mpz_class& x, std::uint64_t p) {
  mpz_class r;
  mpz_fdiv_r_ui(r.get_mpz_t(), x.get_mpz_t(), p);
  return r.get_ui();
}

std::uint64_t dot_mod(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b, std::uint64_t p) {
  unsigned __int128 s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s = (s + static_cast<unsigned __int128>(a[i]) * b[i]) % p;
  return static_cast<std::uint64_t>(s);
}

// Sampling loops reuse one prime many times.
bool is_prime_cached(std::uint64_t p) {
  thread_local std::uint64_t last = 0;
  if (p == last) return true;
  if (!is_prime(p)) return false;
  last = p;
  return true;
}

void check_inputs(const Basis& b, std::uint64_t p, const std::vector<std::uint64_t>& z) {
  if (!is_prime_cached(p)) throw std::invalid_argument("p must be prime");
  if (z.size() != b.dimension()) throw std::invalid_argument("z has the wrong length");
}

}  // namespace

Basis sparsify_basis(const Basis& b, std::uint64_t p, const std::vector<std::uint64_t>& z) {
  check_inputs(b, p, z);
  const std::size_t n = b.dimension();
  std::size_t j = n;
  for (std::size_t i = n; i-- > 0;)
    if (z[i] % p != 0) {
      j = i;
      break;
    }
  if (j == n) return b;
  const std::uint64_t scale = inverse_mod(z[j] % p, p);
  // Columns of B^{-T} are the dual basis vectors b_i^*.
  const RationalMatrix dual = b.inverse().transpose();
  RationalMatrix hat = dual;
  const Rational inv_p = frac(1, static_cast<long>(p));
  for (std::size_t r = 0; r < n; ++r) {
    Rational s = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const std::uint64_t zi = static_cast<std::uint64_t>(static_cast<unsigned __int128>(z[i] % p) * scale % p);
      if (zi != 0) s += Rational(static_cast<unsigned long>(zi)) * dual(r, i);
    }
    hat(r, j) = s * inv_p;
  }
  return Basis(hat.inverse().transpose());
}

SparsifiedPair::SparsifiedPair(Basis parent, std::uint64_t p, std::vector<std::uint64_t> z,
                               std::vector<std::uint64_t> c)
    : parent_(std::move(parent)), p_(p), z_(std::move(z)), c_(std::move(c)) {
  check_inputs(parent_, p_, z_);
  if (c_.empty()) c_.assign(z_.size(), 0);
  if (c_.size() != z_.size()) throw std::invalid_argument("c has the wrong length");
  for (auto& x : z_) x %= p_;
  for (auto& x : c_) x %= p_;
  zc_ = dot_mod(z_, c_, p_);
}

bool SparsifiedPair::z_is_zero() const {
  for (auto x : z_)
    if (x != 0) return false;
  return true;
}

bool SparsifiedPair::shifted() const {
  for (auto x : c_)
    if (x != 0) return true;
  return false;
}

void SparsifiedPair::redraw(Rng& rng, bool shifted) {
  for (auto& x : z_) x = rng.uniform_below(p_);
  for (auto& x : c_) x = shifted ? rng.uniform_below(p_) : 0;
  zc_ = dot_mod(z_, c_, p_);
  sub_.reset();
}

const Basis& SparsifiedPair::sublattice() const {
  if (!sub_) sub_ = std::make_shared<Basis>(sparsify_basis(parent_, p_, z_));
  return *sub_;
}

RationalVector SparsifiedPair::shift_vector() const {
  RationalVector c(c_.size());
  for (std::size_t i = 0; i < c_.size(); ++i) c[i] = Rational(static_cast<unsigned long>(c_[i]));
  return parent_.apply(c);
}

std::uint64_t SparsifiedPair::residue(const std::int64_t* v) const {
  __int128 s = zc_;
  const __int128 p = p_;
  for (std::size_t i = 0; i < z_.size(); ++i) {
    s += static_cast<__int128>(z_[i]) * (v[i] % static_cast<std::int64_t>(p_));
    s %= p;
  }
  if (s < 0) s += p;
  return static_cast<std::uint64_t>(s);
}

bool SparsifiedPair::in_coset(const RationalVector& x) const {
  const RationalVector v = coords(parent_, x);
  unsigned __int128 s = zc_;
  for (std::size_t i = 0; i < v.dimension(); ++i) {
    if (!is_integer(v[i])) throw std::invalid_argument("vector is not a lattice member");
    s = (s + static_cast<unsigned __int128>(z_[i]) * reduce(v[i].get_num(), p_)) % p_;
  }
  return s == 0;
}

SparsifiedPair sample_shifted_sparsifier(const Basis& b, std::uint64_t p, Rng& rng) {
  if (!is_prime_cached(p)) throw std::invalid_argument("p must be prime");
  const std::size_t n = b.dimension();
  std::vector<std::uint64_t> z(n), c(n);
  for (auto& x : z) x = rng.uniform_below(p);
  for (auto& x : c) x = rng.uniform_below(p);
  return SparsifiedPair(b, p, std::move(z), std::move(c));
}

SparsifiedPair sample_unshifted_sparsifier(const Basis& b, std::uint64_t p, Rng& rng) {
  if (p < 101) throw std::invalid_argument("unshifted sparsification needs p >= 101");
  if (!is_prime_cached(p)) throw std::invalid_argument("p must be prime");
  std::vector<std::uint64_t> z(b.dimension());
  for (auto& x : z) x = rng.uniform_below(p);
  return SparsifiedPair(b, p, std::move(z), {});
}

Rational EventCount::probability() const {
  Rational q{mpz_class(static_cast<unsigned long>(hits)), mpz_class(static_cast<unsigned long>(total))};
  q.canonicalize();
  return q;
}

EventCount sparsification_event(std::uint64_t p, const std::vector<std::int64_t>& x,
                                const std::vector<std::vector<std::int64_t>>& ys, bool shifted) {
  const std::size_t n = x.size();
  const auto mod = [p](std::int64_t a) {
    const std::int64_t r = a % static_cast<std::int64_t>(p);
    return static_cast<std::uint64_t>(r < 0 ? r + static_cast<std::int64_t>(p) : r);
  };
  std::vector<std::uint64_t> xr(n);
  std::vector<std::vector<std::uint64_t>> yr(ys.size(), std::vector<std::uint64_t>(n));
  for (std::size_t j = 0; j < n; ++j) xr[j] = mod(x[j]);
  for (std::size_t i = 0; i < ys.size(); ++i) {
    if (ys[i].size() != n) throw std::invalid_argument("dimension mismatch");
    for (std::size_t j = 0; j < n; ++j) yr[i][j] = mod(ys[i][j]);
  }
  std::uint64_t per = 1;
  for (std::size_t j = 0; j < n; ++j) per *= p;
  if (per > (std::uint64_t{1} << 24)) throw std::invalid_argument("enumeration too large");
  EventCount out;
  out.total = shifted ? per * per : per;
  std::vector<std::uint64_t> z(n), c(n);
  auto digits = [&](std::uint64_t k, std::vector<std::uint64_t>& d) {
    for (std::size_t j = 0; j < n; ++j) {
      d[j] = k % p;
      k /= p;
    }
  };
  auto dot = [&](const std::vector<std::uint64_t>& a) {
    std::uint64_t s = 0;
    for (std::size_t j = 0; j < n; ++j) s = (s + z[j] * ((a[j] + c[j]) % p)) % p;
    return s;
  };
  for (std::uint64_t kz = 0; kz < per; ++kz) {
    digits(kz, z);
    for (std::uint64_t kc = 0; kc < (shifted ? per : 1); ++kc) {
      digits(kc, c);
      if (dot(xr) != 0) continue;
      bool ok = true;
      for (const auto& y : yr)
        if (dot(y) == 0) {
          ok = false;
          break;
        }
      if (ok) ++out.hits;
    }
  }
  return out;
}

DivisibilityTest::DivisibilityTest(std::uint64_t p) {
  if (p % 2 == 0) throw std::invalid_argument("divisor must be odd");
  // Newton iteration for the inverse of p modulo 2^64.
  std::uint64_t x = p;
  for (int i = 0; i < 6; ++i) x *= 2 - p * x;
  inverse_ = x;
  limit_ = std::numeric_limits<std::uint64_t>::max() / p;
}

}  // namespace dgslab
