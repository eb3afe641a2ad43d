#ifndef DGSLAB_SPARSIFIER_HPP_
#define DGSLAB_SPARSIFIER_HPP_

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "dgslab/lattice.hpp"
#include "dgslab/rng.hpp"

namespace dgslab {

// Basis of L' = {x in L : <z, B^{-1} x> = 0 mod p}. For z != 0 this replaces
// one dual basis vector by (1/p) sum z_i b_i^* and inverts the transpose; z
// is first scaled so that the replaced coordinate is 1.
Basis sparsify_basis(const Basis& b, std::uint64_t p, const std::vector<std::uint64_t>& z);

// A random sublattice L' of index p (or 1 when z = 0) together with the
// shift w = B c. The coset L' - w is {x in L : <z, B^{-1} x + c> = 0 mod p}.
class SparsifiedPair {
 public:
  SparsifiedPair(Basis parent, std::uint64_t p, std::vector<std::uint64_t> z, std::vector<std::uint64_t> c);

  const Basis& parent() const { return parent_; }
  std::uint64_t prime() const { return p_; }
  const std::vector<std::uint64_t>& z() const { return z_; }
  const std::vector<std::uint64_t>& c() const { return c_; }
  bool z_is_zero() const;
  bool shifted() const;

  // Computed on first use.
  const Basis& sublattice() const;
  RationalVector shift_vector() const;

  // <z, v + c> mod p for an integer coefficient vector v of the parent basis.
  std::uint64_t residue(const std::int64_t* v) const;
  bool in_coset(const std::int64_t* v) const { return residue(v) == 0; }
  // Same test for a lattice member given as a vector.
  bool in_coset(const RationalVector& x) const;
  // <z, c> mod p.
  std::uint64_t shift_residue() const { return zc_; }

  // Draws a fresh z (and c when `shifted`) in place, with the same draws as
  // the sample_* functions below.
  void redraw(Rng& rng, bool shifted);

 private:
  Basis parent_;
  std::uint64_t p_;
  std::vector<std::uint64_t> z_, c_;
  std::uint64_t zc_;
  mutable std::shared_ptr<Basis> sub_;
};

// z and c uniform and independent over Z_p^n.
SparsifiedPair sample_shifted_sparsifier(const Basis& b, std::uint64_t p, Rng& rng);
// z uniform over Z_p^n, c = 0. Requires p >= 101.
SparsifiedPair sample_unshifted_sparsifier(const Basis& b, std::uint64_t p, Rng& rng);

// Exact probability, by enumerating every (z, c) in Z_p^n x Z_p^n, that
// <z, x + c> = 0 and <z, y_i + c> != 0 for all i (mod p). With shifted =
// false, c is fixed to 0 and only z is enumerated.
struct EventCount {
  std::uint64_t hits = 0;
  std::uint64_t total = 0;
  Rational probability() const;
};
EventCount sparsification_event(std::uint64_t p, const std::vector<std::int64_t>& x,
                                const std::vector<std::vector<std::int64_t>>& ys, bool shifted);

// Divisibility by an odd prime through multiplication by its inverse mod 2^64.
class DivisibilityTest {
 public:
  explicit DivisibilityTest(std::uint64_t p);
  bool divides(std::uint64_t x) const { return x * inverse_ <= limit_; }

 private:
  std::uint64_t inverse_;
  std::uint64_t limit_;
};

}  // namespace dgslab

#endif  // DGSLAB_SPARSIFIER_HPP_
