#ifndef DGSLAB_ENUMERATION_HPP_
#define DGSLAB_ENUMERATION_HPP_

#include <cmath>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <vector>

#include "dgslab/lattice.hpp"
#include "dgslab/norms.hpp"

namespace dgslab {

using Int128 = __int128;

// Maximum dimension for enumeration. Defaults to 6, overridable through the
// DGSLAB_DIM_CAP environment variable or set_dimension_cap.
std::size_t dimension_cap();
void set_dimension_cap(std::size_t cap);

// Rational -> floor(q * scale) as a saturating 128-bit integer.
Int128 floor_scaled(const Rational& q, const mpz_class& scale);
Rational int128_to_rational(Int128 x);

// Integer picture of a shifted lattice: with D the lcm of every denominator in
// B and t, the offset x - t of the lattice point x = B v is u / D where
// u = (D B) v - D t is an integer vector.
class IntegerFrame {
 public:
  explicit IntegerFrame(const ShiftedLattice& lat);

  std::size_t dimension() const { return n_; }
  const mpz_class& scale() const { return scale_; }
  const ShiftedLattice& lattice() const { return lat_; }

  // u = (D B) v - D t.
  void offset(const std::int64_t* v, std::int64_t* u) const;
  // Key of an integer offset, scaled by D^2 (l2) or D (l1, linf).
  static Int128 key_of(NormKind kind, const std::int64_t* u, std::size_t n);
  // Key threshold for a rational key, scaled like key_of.
  Int128 scaled_key(NormKind kind, const Rational& key) const;
  Rational unscaled_key(NormKind kind, Int128 key) const;

  RationalVector point(const std::int64_t* v) const;
  RationalVector point_offset(const std::int64_t* v) const;

  // Calls visit(v, u, l2_key) for every v with ||(D B) v - D t||^2 <= bound.
  template <class Visit>
  void enumerate_l2(Int128 bound, Visit&& visit) const;

 private:
  template <class Visit>
  void recurse(int level, long double partial, long double limit, Int128 bound,
               std::int64_t* v, std::int64_t* u, Visit& visit) const;

  ShiftedLattice lat_;
  std::size_t n_;
  mpz_class scale_;
  std::vector<std::int64_t> bz_;  // row-major D B
  std::vector<std::int64_t> tz_;  // D t
  // Gram-Schmidt data of the columns of D B, in long double.
  std::vector<long double> bstar_sq_;
  std::vector<long double> mu_;   // mu_[j * n + i] for j > i
  std::vector<long double> tau_;
};

// All points of a shifted lattice within a key bound, sorted by exact key and
// then lexicographically on the offset. Coordinates are with respect to the
// lattice basis.
class PointCloud {
 public:
  PointCloud(std::shared_ptr<const IntegerFrame> frame, NormBody norm, Int128 key_bound,
             bool exclude_zero_offset);

  const IntegerFrame& frame() const { return *frame_; }
  std::shared_ptr<const IntegerFrame> frame_ptr() const { return frame_; }
  const NormBody& norm() const { return norm_; }
  Int128 key_bound() const { return key_bound_; }
  std::size_t size() const { return keys_.size(); }
  std::size_t dimension() const { return n_; }

  const std::int64_t* coords(std::size_t i) const { return coords_.data() + i * n_; }
  const std::int64_t* offset(std::size_t i) const { return offsets_.data() + i * n_; }
  Int128 key(std::size_t i) const { return keys_[i]; }
  // Number of stored points with key <= k; k must not exceed key_bound().
  std::size_t count_within(Int128 k) const;

 private:
  std::shared_ptr<const IntegerFrame> frame_;
  NormBody norm_;
  Int128 key_bound_;
  std::size_t n_;
  std::vector<std::int64_t> coords_;
  std::vector<std::int64_t> offsets_;
  std::vector<Int128> keys_;
};

// --- template implementation -------------------------------------------------

template <class Visit>
void IntegerFrame::enumerate_l2(Int128 bound, Visit&& visit) const {
  if (bound < 0) return;
  std::vector<std::int64_t> v(n_), u(n_);
  const long double b = static_cast<long double>(bound);
  // Generous slack: pruning must never drop a point the exact check accepts.
  const long double limit = b * (1 + 1e-12L) + 1e-9L;
  recurse(static_cast<int>(n_) - 1, 0.0L, limit, bound, v.data(), u.data(), visit);
}

template <class Visit>
void IntegerFrame::recurse(int level, long double partial, long double limit, Int128 bound,
                           std::int64_t* v, std::int64_t* u, Visit& visit) const {
  const std::size_t n = n_;
  const std::size_t i = static_cast<std::size_t>(level);
  long double center = tau_[i];
  for (std::size_t j = i + 1; j < n; ++j) center -= mu_[j * n + i] * static_cast<long double>(v[j]);
  const long double rem = limit - partial;
  if (rem < 0) return;
  const long double half = std::sqrt(rem / bstar_sq_[i]);
  const long double lo = std::ceil(center - half);
  const long double hi = std::floor(center + half);
  if (!(std::fabs(lo) < 4e18L && std::fabs(hi) < 4e18L))
    throw std::overflow_error("enumeration coefficient out of range");
  for (std::int64_t x = static_cast<std::int64_t>(lo); x <= static_cast<std::int64_t>(hi); ++x) {
    v[i] = x;
    const long double d = static_cast<long double>(x) - center;
    const long double next = partial + d * d * bstar_sq_[i];
    if (next > limit) continue;
    if (level == 0) {
      offset(v, u);
      const Int128 k = key_of(NormKind::l2, u, n);
      if (k <= bound) visit(static_cast<const std::int64_t*>(v), static_cast<const std::int64_t*>(u), k);
    } else {
      recurse(level - 1, next, limit, bound, v, u, visit);
    }
  }
  v[i] = 0;
}

}  // namespace dgslab

#endif  // DGSLAB_ENUMERATION_HPP_
