#ifndef DGSLAB_COUNTING_HPP_
#define DGSLAB_COUNTING_HPP_

#include <cstdint>
#include <memory>
#include <string>

#include "dgslab/enumeration.hpp"
#include "dgslab/lattice.hpp"
#include "dgslab/oracles.hpp"
#include "dgslab/rng.hpp"

namespace dgslab {

// Constants of the counting reductions. The faithful preset uses the prime
// interval [200fN, 400fN] and l = ceil(100 f^2 p^2 / N^2) trials; the desk
// preset uses [8fN, 16fN] and l = ceil(16 f^2 p^2 / N^2), which keeps the
// same decision rule and still separates the two sides by several standard
// deviations. The primitive variant multiplies both prime bounds by
// log(10fN) and never goes below 101.
struct CountingParams {
  enum class Preset { faithful, desk };
  Preset preset = Preset::faithful;
  // Total failure budget of one estimate.
  long double confidence = 0.99L;
  // Error assumed for a single decision run when sizing majority votes.
  long double single_run_error = 0.36787944117144233L;

  static CountingParams faithful() { return {}; }
  static CountingParams desk() { return {Preset::desk, 0.99L, 0.05L}; }

  std::uint64_t shifted_prime(long double f, std::uint64_t n_threshold) const;
  std::uint64_t primitive_prime(long double f, std::uint64_t n_threshold) const;
  std::uint64_t trials(long double f, std::uint64_t p, std::uint64_t n_threshold) const;
  std::string name() const { return preset == Preset::faithful ? "faithful" : "desk"; }
};

// One GapVCP or GapPVCP question: more than gap_gamma * N points (primitive
// pairs) in the ball of the given radius, or at most N? radius_key is the
// radius as a key of the oracle's norm (r^2 for l2).
struct GapInstance {
  ShiftedLattice lat;
  Rational radius_key;
  std::uint64_t threshold_n = 1;
  long double gap_gamma = 2;
  long double beta = 0;  // primitive variant only
};

// What one decision run did.
struct DecisionStats {
  std::uint64_t prime = 0;
  std::uint64_t planned_trials = 0;
  std::uint64_t trials = 0;
  std::uint64_t hits = 0;
  long double threshold = 0;
  bool guard = false;  // primitive variant answered from the lambda_1 checks
};

// YES iff #{i : r_i <= r} > l N / p + 2 sqrt(l) over l shifted sparsifications
// answered by bounded closest-vector queries. Stops as soon as the outcome
// is fixed. gap_gamma must equal 1 + 1/f.
bool gap_vcp_decide(const GapInstance& inst, SublatticeOracle& oracle, long double f, Rng& rng,
                    const CountingParams& params = {}, DecisionStats* stats = nullptr);

// The primitive variant: NO when lambda_1 > r or lambda_1 < beta r / N,
// otherwise the same rule over unshifted sparsifications and bounded
// shortest-vector queries.
bool gap_pvcp_decide(const GapInstance& inst, SublatticeOracle& oracle, long double f, Rng& rng,
                     const CountingParams& params = {}, DecisionStats* stats = nullptr);

// Smallest odd R such that a majority of R runs, each wrong with probability
// at most `single_error`, is wrong with probability at most `target`.
std::uint64_t majority_runs(long double single_error, long double target);

struct CountEstimate {
  std::uint64_t value = 1;
  long double lower_factor = 1;  // value >= lower_factor * true count
  bool degenerate_flag = false;  // primitive variant: lambda_1 below beta r
  bool none_found = false;       // primitive variant: no primitive vector within r
  std::string method;
  std::uint64_t decisions = 0;   // single decision runs spent
};

// Ladder estimate of |(L - t) within radius| with rungs ceil(gamma^{j/20}),
// gamma = 1 + 1/f. Each rung is tested by a majority of gap_vcp_decide runs
// at gap max(gamma^{1/20}, 1 + 1/(N+1)); an exponential then binary search
// finds the last accepted rung N and reports N + 1 (1 if none is accepted).
CountEstimate estimate_count(const ShiftedLattice& lat, const Rational& radius_key, long double f,
                             SublatticeOracle& oracle, Rng& rng, const CountingParams& params = {});

// The same ladder over gap_pvcp_decide for xi(L, r) with the guard
// beta = 1/(100 n^2 f). Reports none_found when lambda_1 > r and
// degenerate_flag when lambda_1 < beta r; both give value 1.
CountEstimate estimate_primitive_count(const Basis& basis, const Rational& radius_key, long double f,
                                       SublatticeOracle& oracle, Rng& rng, const CountingParams& params = {});

// Exact counts read from one sorted enumeration, for tests and for the fast
// mode of the samplers. Radii beyond the enumerated bound are re-enumerated.
class ExactCounter {
 public:
  ExactCounter(const ShiftedLattice& lat, const NormBody& norm, const Rational& key_bound);

  const IntegerFrame& frame() const { return *frame_; }
  std::uint64_t count(const Rational& radius_key);
  // Number of primitive +- pairs; the lattice must be unshifted.
  std::uint64_t primitive_count(const Rational& radius_key);
  // Smallest nonzero key (lambda_1 as a key); unshifted lattices only.
  Rational shortest_key();

 private:
  void ensure(Int128 bound);

  std::shared_ptr<const IntegerFrame> frame_;
  NormBody norm_;
  std::unique_ptr<PointCloud> cloud_;
  std::vector<Int128> primitive_keys_;  // sorted, one per primitive vector
};

}  // namespace dgslab

#endif  // DGSLAB_COUNTING_HPP_
