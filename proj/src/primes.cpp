#include "dgslab/primes.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace dgslab {

namespace {

using U128 = unsigned __int128;

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<U128>(a) * b % m);
}

std::uint64_t pow_mod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mul_mod(r, a, m);
    a = mul_mod(a, a, m);
    e >>= 1;
  }
  return r;
}

constexpr std::uint64_t kBases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t q : kBases) {
    if (n == q) return true;
    if (n % q == 0) return false;
  }
  for (std::uint64_t q = 41; q < 1000 && q * q <= n; q += 2)
    if (n % q == 0) return false;
  if (n < 1000 * 1000) return true;
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : kBases) {
    std::uint64_t x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::uint64_t prime_in_interval(std::uint64_t lo, std::uint64_t hi) {
  for (std::uint64_t x = lo; x <= hi && x >= lo; ++x)
    if (is_prime(x)) return x;
  throw std::invalid_argument("no prime in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
}

std::uint64_t prime_between(long double a, long double b) {
  if (!(a <= b) || !(b < 1.8e19L)) throw std::invalid_argument("bad prime interval");
  const long double lo = std::ceil(std::max(a, 2.0L));
  const long double hi = std::floor(b);
  if (hi < lo) throw std::invalid_argument("prime interval holds no integer");
  return prime_in_interval(static_cast<std::uint64_t>(lo), static_cast<std::uint64_t>(hi));
}

}  // namespace dgslab
