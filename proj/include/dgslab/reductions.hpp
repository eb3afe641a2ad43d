#ifndef DGSLAB_REDUCTIONS_HPP_
#define DGSLAB_REDUCTIONS_HPP_

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dgslab/lattice.hpp"
#include "dgslab/rng.hpp"

namespace dgslab {

enum class OracleKind { dgs, cdgs };

// What a handle was asked to do.
struct HandleLog {
  std::uint64_t calls = 0;
  std::uint64_t samples = 0;
  std::set<std::string> lattices;  // lattice_key of every queried lattice
};

// A DGS oracle. `sample` returns an offset y in L - t for kind dgs and a
// vector of L for kind cdgs (the shift is then zero). `shortest_of_batch`,
// when set, returns what the shortest nonzero of k independent samples
// would be, ties broken lexicographically, or nothing if all k are zero.
struct DgsOracleHandle {
  OracleKind kind = OracleKind::dgs;
  std::string name;
  std::function<RationalVector(const ShiftedLattice&, const Rational& s, Rng&)> sample;
  std::function<std::optional<RationalVector>(const Basis&, const Rational& s, std::uint64_t k, Rng&)>
      shortest_of_batch;
  std::shared_ptr<HandleLog> log = std::make_shared<HandleLog>();
};

std::string lattice_key(const ShiftedLattice& lat);

// Draws from exact_dgs, cached per (lattice, s). The cdgs version also
// answers shortest_of_batch in one draw from the distribution of the
// minimum over the (norm, lex)-sorted support.
DgsOracleHandle exact_dgs_handle(OracleKind kind);

// Passes through to `inner` with probability keep_probability; otherwise
// returns y + M b_1 for the inner sample y and the smallest power of two M
// with ||y + M b_1|| >= max(2 ||y|| + ||b_1||, min_norm). The result stays in
// the queried coset but is never a closest vector, so the handle is
// (1, 1 - keep_probability)-close to `inner`.
DgsOracleHandle adversarial_handle(DgsOracleHandle inner, long double keep_probability, long double min_norm = 0);

struct CvpParameters {
  Rational q;  // lcm of every basis and shift denominator
  Rational d;  // covering radius bound n 2^m
  Rational s;  // 1 / ceil(100 f n q log(10 + d))
};
CvpParameters cvp_parameters(const ShiftedLattice& lat, std::uint64_t f);

// One oracle call at the parameter above; returns y + t. The result is a
// closest vector with probability at least 1/(2 f^2) for an
// (f, 1 - 1/f)-DGS oracle.
RationalVector cvp_via_dgs(const ShiftedLattice& lat, std::uint64_t f, const DgsOracleHandle& oracle, Rng& rng);

// ceil(2 f^2 log(1/delta)) calls, nearest result kept (lexicographic ties).
std::uint64_t amplification_runs(std::uint64_t f, long double delta);
RationalVector cvp_via_dgs_amplified(const ShiftedLattice& lat, std::uint64_t f, const DgsOracleHandle& oracle,
                                     long double delta, Rng& rng);

struct SvpGrid {
  std::vector<Rational> s;
  long double d_min = 0;
  long double d_max = 0;
  std::uint64_t samples_per_point = 0;  // ceil(100 n f^2)
};

// s_i = (1 + 1/n^2)^i d_min / sqrt(log f) with d_min the bit-length lower
// bound on lambda_1 and d_max the shortest basis column. The grid stops at
// the first s_i above 10 d_max / sqrt(log f); every later point only
// matters once 10 lambda_1 / sqrt(log f) is already covered.
SvpGrid svp_grid(const Basis& basis, std::uint64_t f);

struct SvpSearch {
  std::optional<RationalVector> vector;  // empty when every sample was zero
  std::uint64_t grid_points = 0;
  std::uint64_t samples = 0;
};

// gamma-SVP with gamma = 10 sqrt(n / log f) from a centered DGS oracle:
// ceil(100 n f^2) samples at each grid point, shortest nonzero returned.
SvpSearch svp_via_cdgs(const Basis& basis, std::uint64_t f, const DgsOracleHandle& oracle, Rng& rng);
long double svp_approximation_factor(std::size_t n, std::uint64_t f);

}  // namespace dgslab

#endif  // DGSLAB_REDUCTIONS_HPP_
