#ifndef DGSLAB_SAMPLERS_HPP_
#define DGSLAB_SAMPLERS_HPP_

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "dgslab/counting.hpp"
#include "dgslab/lattice.hpp"
#include "dgslab/oracles.hpp"
#include "dgslab/rng.hpp"

namespace dgslab {

// Where the ball counts N_i come from. `estimate` runs the randomized ladder
// estimators through the sampler's oracle; `exact` reads them from an
// enumeration (the fast-test mode).
enum class CountMode { estimate, exact };

struct SamplerConfig {
  std::uint64_t f = 10;
  CountMode counts = CountMode::estimate;
  CountingParams counting = CountingParams::faithful();
  // Fast-test mode only: use this l instead of the schedule's own and
  // recompute epsilon from the Gaussian tail bound.
  std::optional<std::uint64_t> ell_override;
  // Rejection loops give up after iteration_cap_factor * f^2 rounds.
  std::uint64_t iteration_cap_factor = 100000;
};

// Radii, weights and counts of one DGS or cDGS run, for the lattice scaled
// so that s = 1. DGS weights carry the common factor e^{pi d^2}; cDGS
// weights are absolute because W also sets the probability of 0.
struct RadialSchedule {
  std::vector<Rational> radii_sq;
  std::vector<long double> radii;
  std::vector<long double> weights;
  std::vector<CountEstimate> counts;
  long double total = 0;  // W = sum N_i w_i
  std::uint64_t ell = 0;
  long double epsilon = 0;
  Rational base_sq;  // d^2 (DGS) or lambda_1^2 (cDGS)
};

struct SampleStats {
  std::uint64_t index = 0;          // chosen schedule index k
  std::uint64_t uniform_rounds = 0; // rounds of the uniform ball / primitive sampler
  std::uint64_t z_rounds = 0;       // rounds of the 1-D sampler (cDGS)
  bool zero_branch = false;         // cDGS returned 0 directly
  bool svp_branch = false;          // cDGS used SVP(L) for N_k = 1
};

// Nearly uniform point of (L - t) within the radius, for an oracle bound to
// L - t: prime p in [10fN, 20fN], shifted sparsification, bounded closest
// query, repeat until it lands in the ball. Needs N <= count <= fN.
CosetPoint uniform_ball_sample(SublatticeOracle& oracle, const Rational& radius_key, std::uint64_t n_count,
                               std::uint64_t f, Rng& rng, std::uint64_t* rounds = nullptr,
                               std::uint64_t iteration_cap_factor = 100000);

// Nearly uniform primitive +- pair of L within the radius, for an oracle bound
// to an unshifted L: prime p in [100fN log(10fN), 200fN log(10fN)], unshifted
// sparsification, bounded shortest query.
CosetPoint uniform_primitive_sample(SublatticeOracle& oracle, const Rational& radius_key, std::uint64_t n_count,
                                    std::uint64_t f, Rng& rng, std::uint64_t* rounds = nullptr,
                                    std::uint64_t iteration_cap_factor = 100000);

// DGS from a CVP oracle. The constructor scales the lattice by 1/s, finds
// d = dist(t, L) with the oracle, and builds the schedule
// r_i^2 = d^2 + i/(10f), i = 0..l, l = ceil(100 n^2 f log(10 + d)).
// Samples are offsets x - t in the original scale.
class DgsSampler {
 public:
  DgsSampler(const ShiftedLattice& lat, const Rational& s, const SamplerConfig& config, const OracleFactory& factory,
             Rng& rng);

  RationalVector sample(Rng& rng, SampleStats* stats = nullptr);
  // Integer coefficients v of the sampled lattice point B v.
  std::vector<std::int64_t> sample_coords(Rng& rng, SampleStats* stats = nullptr);
  RationalVector offset_of(const std::vector<std::int64_t>& v) const;

  const RadialSchedule& schedule() const { return schedule_; }
  const ShiftedLattice& lattice() const { return lat_; }
  SublatticeOracle& oracle() { return *oracle_; }

 private:
  ShiftedLattice lat_;
  ShiftedLattice scaled_;
  SamplerConfig config_;
  std::unique_ptr<SublatticeOracle> oracle_;
  RadialSchedule schedule_;
  std::vector<long double> cumulative_;
};

// Centered DGS from an SVP oracle: r_i^2 = lambda_1^2 + i/(100nf),
// l = ceil(200 n^2 f^2), 0 with probability 1/(1+W), otherwise a primitive x
// at radius r_k times z ~ D_{Z \ {0}, 1/||x||}.
class CdgsSampler {
 public:
  CdgsSampler(const Basis& basis, const Rational& s, const SamplerConfig& config, const OracleFactory& factory,
              Rng& rng);

  RationalVector sample(Rng& rng, SampleStats* stats = nullptr);
  std::vector<std::int64_t> sample_coords(Rng& rng, SampleStats* stats = nullptr);
  RationalVector point_of(const std::vector<std::int64_t>& v) const;

  const RadialSchedule& schedule() const { return schedule_; }
  const Basis& basis() const { return basis_; }
  SublatticeOracle& oracle() { return *oracle_; }

 private:
  Basis basis_;
  ShiftedLattice scaled_;
  SamplerConfig config_;
  std::unique_ptr<SublatticeOracle> oracle_;
  RadialSchedule schedule_;
  std::vector<long double> cumulative_;
  std::vector<std::int64_t> svp_coords_;
  long double svp_length_ = 0;
};

// One-shot wrappers that build the schedule and draw a single sample.
RationalVector dgs_sample(const ShiftedLattice& lat, const Rational& s, const SamplerConfig& config,
                          const OracleFactory& factory, Rng& rng);
RationalVector cdgs_sample(const Basis& basis, const Rational& s, const SamplerConfig& config,
                           const OracleFactory& factory, Rng& rng);

}  // namespace dgslab

#endif  // DGSLAB_SAMPLERS_HPP_
