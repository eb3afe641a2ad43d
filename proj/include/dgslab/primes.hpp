#ifndef DGSLAB_PRIMES_HPP_
#define DGSLAB_PRIMES_HPP_

#include <cstdint>

namespace dgslab {

// Deterministic for every 64-bit input: trial division by small primes, then
// Miller-Rabin with the first twelve prime bases.
bool is_prime(std::uint64_t n);

// Smallest prime in [lo, hi], scanning upward from lo. Throws
// std::invalid_argument when the interval holds no prime.
std::uint64_t prime_in_interval(std::uint64_t lo, std::uint64_t hi);

// Interval endpoints ceil(a) and floor(b) for real a <= b, as used by the
// reductions that ask for a prime between two real bounds.
std::uint64_t prime_between(long double a, long double b);

}  // namespace dgslab

#endif  // DGSLAB_PRIMES_HPP_
