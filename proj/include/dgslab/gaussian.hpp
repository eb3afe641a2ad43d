#ifndef DGSLAB_GAUSSIAN_HPP_
#define DGSLAB_GAUSSIAN_HPP_

#include <cstdint>

#include "dgslab/rng.hpp"

namespace dgslab {

// rho_s(Z \ {0}) = 2 sum_{k >= 1} e^{-pi k^2 / s^2}. Large s goes through the
// Poisson form s (1 + 2 sum e^{-pi k^2 s^2}) - 1.
long double rho_z_nonzero(long double s);

// 2 sum_{k >= 1} e^{-pi k^2 x} (1 - e^{-pi k^2 delta}), which is
// rho_{1/sqrt(x)}(Z \ {0}) - rho_{1/sqrt(x + delta)}(Z \ {0}) without the
// cancellation.
long double rho_z_nonzero_difference(long double x, long double delta);

// Exact sampler for D_{Z \ {0}, s}. `iterations`, when given, receives the
// number of rounds of the rejection loop.
std::int64_t sample_z_nonzero(long double s, Rng& rng, std::uint64_t* iterations = nullptr);

// Probability that one round of the sampler outputs 1:
// e^{-pi/s^2} / (e^{-pi/s^2} + int_1^inf e^{-pi x^2/s^2} dx).
long double sample_z_one_probability(long double s);

}  // namespace dgslab

#endif  // DGSLAB_GAUSSIAN_HPP_
