#ifndef DGSLAB_RNG_HPP_
#define DGSLAB_RNG_HPP_

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace dgslab {

std::uint64_t splitmix64(std::uint64_t& state);

// Seedable, splittable generator. The engine is std::mt19937_64; child
// streams get seeds derived through SplitMix64 from (seed, stream id), so a
// child's output does not depend on how much the parent has been used.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0, std::string name = "root");

  std::uint64_t seed() const { return seed_; }
  const std::string& name() const { return name_; }
  Rng split(std::uint64_t stream) const;

  std::uint64_t next_u64() { return engine_(); }
  // Uniform on {0, ..., n - 1}; exact, by rejection.
  std::uint64_t uniform_below(std::uint64_t n);
  // Uniform on (0, 1) with 63 random bits, never exactly 0 or 1.
  long double uniform_open01();
  bool bernoulli(long double p) { return uniform_open01() < p; }
  // Index i with probability (cumulative[i] - cumulative[i-1]) / cumulative.back().
  std::size_t pick_cumulative(const std::vector<long double>& cumulative);

 private:
  std::uint64_t seed_;
  std::string name_;
  std::mt19937_64 engine_;
};

}  // namespace dgslab

#endif  // DGSLAB_RNG_HPP_
