#include "dgslab/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace dgslab {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {

std::mt19937_64 make_engine(std::uint64_t seed) {
  std::uint64_t s = seed;
  std::seed_seq seq{static_cast<std::uint32_t>(splitmix64(s)), static_cast<std::uint32_t>(splitmix64(s)),
                    static_cast<std::uint32_t>(splitmix64(s)), static_cast<std::uint32_t>(splitmix64(s))};
  return std::mt19937_64(seq);
}

}  // namespace

Rng::Rng(std::uint64_t seed, std::string name)
    : seed_(seed), name_(std::move(name)), engine_(make_engine(seed)) {}

Rng Rng::split(std::uint64_t stream) const {
  std::uint64_t s = seed_ ^ (0xd1b54a32d192ed03ULL * (stream + 1));
  const std::uint64_t child = splitmix64(s) ^ splitmix64(s);
  return Rng(child, name_ + "/" + std::to_string(stream));
}

std::uint64_t Rng::uniform_below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("uniform_below(0)");
  // Reject the incomplete top block so every residue is equally likely.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % n;
}

long double Rng::uniform_open01() {
  // 63 bits plus one half stays exactly representable in a long double.
  const std::uint64_t x = engine_() >> 1;
  return (static_cast<long double>(x) + 0.5L) * 0x1p-63L;
}

std::size_t Rng::pick_cumulative(const std::vector<long double>& cumulative) {
  if (cumulative.empty() || !(cumulative.back() > 0)) throw std::invalid_argument("empty weight table");
  const long double u = uniform_open01() * cumulative.back();
  auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  if (it == cumulative.end()) --it;
  return static_cast<std::size_t>(it - cumulative.begin());
}

}  // namespace dgslab
