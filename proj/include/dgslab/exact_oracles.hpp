#ifndef DGSLAB_EXACT_ORACLES_HPP_
#define DGSLAB_EXACT_ORACLES_HPP_

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "dgslab/enumeration.hpp"
#include "dgslab/lattice.hpp"
#include "dgslab/norms.hpp"
#include "dgslab/rng.hpp"

namespace dgslab {

struct BallPoint {
  RationalVector point;   // lattice member x
  RationalVector offset;  // x - center
  Rational key;           // norm key of the offset
  std::vector<std::int64_t> coords;
};

// Lattice members x with ||x - t||_K <= radius, sorted by key then
// lexicographically.
struct BallEnumeration {
  RationalVector center;
  Rational radius_key;
  NormBody norm = NormBody::l2();
  std::vector<BallPoint> points;
  std::size_t size() const { return points.size(); }
};

BallEnumeration enumerate_ball(const ShiftedLattice& lat, const Rational& radius_sq);
BallEnumeration enumerate_ball(const ShiftedLattice& lat, const Rational& radius_key, const NormBody& norm);

// Closest lattice point to the shift, ties broken lexicographically.
RationalVector solve_cvp(const ShiftedLattice& lat);
Rational cvp_distance_sq(const ShiftedLattice& lat);
// Same for any norm; lq comparisons that fall within rounding throw
// std::domain_error.
RationalVector solve_cvp(const ShiftedLattice& lat, const NormBody& norm);

struct SvpResult {
  RationalVector vector;  // lexicographically smallest among the shortest
  Rational lambda1_sq;
  std::optional<Rational> lambda2_sq;  // absent in dimension one
};
SvpResult solve_svp(const Basis& b);
// Shortest nonzero vector under an exact norm, same tie-break.
RationalVector shortest_vector(const Basis& b, const NormBody& norm);

std::size_t exact_count(const ShiftedLattice& lat, const Rational& radius_sq);
// Number of primitive pairs {x, -x} with ||x|| <= radius.
std::size_t exact_primitive_count(const Basis& b, const Rational& radius_sq);
std::size_t exact_primitive_count(const Basis& b, const Rational& radius_key, const NormBody& norm);

// A finite distribution over rational vectors. Every vector whose key is at
// most support_key_bound is listed; the mass the truncation dropped is below
// truncated_mass_bound.
class ExactDistribution {
 public:
  ExactDistribution() = default;
  ExactDistribution(std::vector<RationalVector> support, std::vector<long double> weights,
                    NormBody norm, Rational support_key_bound, long double truncated_mass_bound);

  const std::vector<RationalVector>& support() const { return support_; }
  const std::vector<long double>& probabilities() const { return probability_; }
  std::size_t size() const { return support_.size(); }
  const NormBody& norm() const { return norm_; }
  const Rational& support_key_bound() const { return key_bound_; }
  long double truncated_mass_bound() const { return tail_; }

  long double probability_of(const RationalVector& y) const;
  long double probability_of_key(const std::string& key) const;
  bool inside_support_bound(const RationalVector& y) const;
  RationalVector sample(Rng& rng) const;
  std::size_t sample_index(Rng& rng) const;

 private:
  std::vector<RationalVector> support_;
  std::vector<long double> probability_;
  std::vector<long double> cumulative_;
  std::unordered_map<std::string, std::size_t> index_;
  NormBody norm_ = NormBody::l2();
  Rational key_bound_;
  long double tail_ = 0;
};

// D_{L - t, s} truncated to the ball where the tail bound drops below tail_eps.
ExactDistribution exact_dgs(const ShiftedLattice& lat, const Rational& s, long double tail_eps = 1e-12L);

// e^{-r^2 n}; throws PreconditionViolated unless
// r >= 10 sqrt(log(10 + dist / (s sqrt n))).
long double gaussian_tail_bound(long double dist, long double s, std::size_t n, long double r);
// (sqrt(2 pi e r'^2) exp(-pi r^2))^n with r'^2 = dist^2 / (s^2 n) + r^2, valid
// for r >= 1/sqrt(2 pi). Both bound Pr[||X||^2 >= dist^2 + r^2 s^2 n].
long double gaussian_tail_bound_general(long double dist, long double s, std::size_t n, long double r);
long double tail_hypothesis_radius(long double dist, long double s, std::size_t n);

// Neumaier-compensated sum.
long double compensated_sum(const std::vector<long double>& xs);

}  // namespace dgslab

#endif  // DGSLAB_EXACT_ORACLES_HPP_
