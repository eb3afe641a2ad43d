#include "dgslab/gaussian.hpp"

#include <cmath>
#include <numbers>

#include <boost/math/special_functions/erf.hpp>

#include "dgslab/errors.hpp"

namespace dgslab {

namespace {

constexpr long double kPi = std::numbers::pi_v<long double>;
constexpr std::uint64_t kRoundCap = 1'000'000;

// e^{a^2} erfc(a) for a > 0.
long double erfcx(long double a) {
  if (a < 100) return std::exp(a * a) * boost::math::erfc(a);
  const long double inv = 1 / (a * a);
  return (1 - inv / 2 + 3 * inv * inv / 4 - 15 * inv * inv * inv / 8) / (a * std::sqrt(kPi));
}

// 2 sum_{k >= 1} e^{-pi k^2 x} until the terms stop mattering.
long double theta_tail(long double x) {
  long double sum = 0;
  for (long k = 1;; ++k) {
    const long double term = std::exp(-kPi * static_cast<long double>(k * k) * x);
    sum += term;
    if (term <= 1e-20L * sum || term == 0) break;
  }
  return 2 * sum;
}

// Continuous Gaussian with parameter s restricted to (1, inf).
long double continuous_tail(long double s, Rng& rng) {
  const long double a = std::sqrt(kPi) / s;
  if (a < 100) {
    const long double tail = boost::math::erfc(a);
    return s / std::sqrt(kPi) * boost::math::erfc_inv(rng.uniform_open01() * tail);
  }
  // With w = x^2 the density on (1, inf) is proportional to e^{-pi w / s^2} / sqrt(w):
  // draw w - 1 exponentially and accept with probability 1/sqrt(w).
  for (std::uint64_t i = 0; i < kRoundCap; ++i) {
    const long double w = 1 - std::log(rng.uniform_open01()) * s * s / kPi;
    if (rng.uniform_open01() * std::sqrt(w) < 1) return std::sqrt(w);
  }
  throw IterationCapExceeded("continuous tail sampler");
}

}  // namespace

long double rho_z_nonzero(long double s) {
  if (!(s > 0)) throw PreconditionViolated("s must be positive");
  if (s > 8) return s * (1 + theta_tail(s * s)) - 1;
  return theta_tail(1 / (s * s));
}

long double rho_z_nonzero_difference(long double x, long double delta) {
  long double sum = 0;
  for (long k = 1;; ++k) {
    const long double k2 = static_cast<long double>(k * k);
    const long double term = std::exp(-kPi * k2 * x) * -std::expm1(-kPi * k2 * delta);
    sum += term;
    if (term <= 1e-20L * sum || term == 0) break;
  }
  return 2 * sum;
}

long double sample_z_one_probability(long double s) {
  if (!(s > 0)) throw PreconditionViolated("s must be positive");
  // Dividing through by e^{-pi/s^2}: 1 / (1 + (s/2) erfcx(sqrt(pi)/s)).
  return 1 / (1 + s / 2 * erfcx(std::sqrt(kPi) / s));
}

std::int64_t sample_z_nonzero(long double s, Rng& rng, std::uint64_t* iterations) {
  const long double one = sample_z_one_probability(s);
  for (std::uint64_t i = 1; i <= kRoundCap; ++i) {
    std::int64_t y = 0;
    if (rng.bernoulli(one)) {
      y = 1;
    } else {
      const long double x = continuous_tail(s, rng);
      if (x > 9e18L) continue;
      const long double c = std::ceil(x);
      if (rng.bernoulli(std::exp(-kPi * (c - x) * (c + x) / (s * s)))) y = static_cast<std::int64_t>(c);
    }
    if (y != 0) {
      if (iterations) *iterations = i;
      return rng.next_u64() & 1 ? y : -y;
    }
  }
  throw IterationCapExceeded("sample_z_nonzero");
}

}  // namespace dgslab
