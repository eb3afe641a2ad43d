#ifndef DGSLAB_GENERAL_NORMS_HPP_
#define DGSLAB_GENERAL_NORMS_HPP_

#include <cstdint>
#include <memory>
#include <vector>

#include "dgslab/counting.hpp"
#include "dgslab/exact_oracles.hpp"
#include "dgslab/lattice.hpp"
#include "dgslab/norms.hpp"
#include "dgslab/oracles.hpp"
#include "dgslab/rng.hpp"
#include "dgslab/samplers.hpp"

namespace dgslab {

// Closest vector of L to t in the given norm, lexicographic ties, found by
// an exact search over a coefficient box.
RationalVector cvp_k(const ShiftedLattice& lat, const NormBody& norm);

// gap_vcp_decide with a CVP_K oracle built by `factory` for (L - t, norm).
// inst.radius_key is a key of that norm (r for l1 and linf, r^2 for l2).
bool gap_vcp_k(const GapInstance& inst, const NormBody& norm, long double f, Rng& rng,
               const CountingParams& params = {}, const OracleFactory& factory = scan_oracle_factory(),
               DecisionStats* stats = nullptr);

// Nearly uniform point of (L - t) within the K-ball, as an offset x - t.
// An empty ball gives -t.
RationalVector uniform_k_ball_sample(const ShiftedLattice& lat, const Rational& radius_key, std::uint64_t n_count,
                                     std::uint64_t f, const NormBody& norm, Rng& rng,
                                     const OracleFactory& factory = scan_oracle_factory());
RationalVector uniform_k_ball_sample(SublatticeOracle& oracle, const Rational& radius_key, std::uint64_t n_count,
                                     std::uint64_t f, Rng& rng);

// Balls B_i = r_i K + c_i with weights summing to one.
struct BallDecomposition {
  std::vector<RationalVector> centers;
  std::vector<Rational> radius_keys;
  std::vector<long double> radii;
  std::vector<long double> weights;
  std::vector<CountEstimate> counts;
};

struct ChiQConfig {
  std::uint64_t f = 10;
  CountMode counts = CountMode::estimate;
  CountingParams counting = CountingParams::faithful();
  OracleFactory factory = scan_oracle_factory();
  // Refuse schedules longer than this many balls.
  std::uint64_t max_ell = 50000000;
};

// Ball decomposition of chi_q(L - t), the law with mass proportional to
// e^{-||x||_q^q}, for q in {1, 2}: d = dist_q(t, L), r_i^q = d^q + i/(10f),
// l = 100 n^q f^{q+1}, centers 0, w_i = N_i (e^{-r_i^q} - e^{-r_{i+1}^q})
// (the last one N_l e^{-r_l^q}), normalized.
BallDecomposition chi_q_decomposition(const ShiftedLattice& lat, int q, const ChiQConfig& config, Rng& rng);

// Picks a ball by weight and samples it uniformly with the sparsification
// sampler. (1 + 1/f, e^{-f})-close to chi_q.
class ChiQSampler {
 public:
  ChiQSampler(const ShiftedLattice& lat, int q, const ChiQConfig& config, Rng& rng);

  RationalVector sample(Rng& rng);
  const BallDecomposition& decomposition() const { return decomposition_; }
  SublatticeOracle& oracle() { return *oracle_; }

 private:
  ShiftedLattice lat_;
  ChiQConfig config_;
  std::unique_ptr<SublatticeOracle> oracle_;
  BallDecomposition decomposition_;
  std::vector<long double> cumulative_;
};

RationalVector lsp_chi_q_sample(const ShiftedLattice& lat, int q, const ChiQConfig& config, Rng& rng);

// chi_q(L - t) by enumeration, truncated at ||x||_q^q = d^q + T with
// T = log(1/tail_eps) + n log(10 + d + log(1/tail_eps)) + 5. The dropped mass
// is estimated, not proved, to be below tail_eps.
ExactDistribution exact_chi_q(const ShiftedLattice& lat, int q, long double tail_eps = 1e-12L);

}  // namespace dgslab

#endif  // DGSLAB_GENERAL_NORMS_HPP_
