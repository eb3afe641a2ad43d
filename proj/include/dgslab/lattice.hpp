#ifndef DGSLAB_LATTICE_HPP_
#define DGSLAB_LATTICE_HPP_

#include <memory>
#include <string>
#include <vector>

#include "dgslab/rational.hpp"

namespace dgslab {

// Full-rank lattice basis, stored by columns. Immutable and cheap to copy.
class Basis {
 public:
  Basis() = default;
  // Throws std::invalid_argument for non-square or singular input.
  explicit Basis(std::vector<RationalVector> columns);
  explicit Basis(const RationalMatrix& columns);
  static Basis identity(std::size_t n);
  static Basis diagonal(const std::vector<Rational>& entries);

  std::size_t dimension() const { return impl_ ? impl_->matrix.size() : 0; }
  const RationalMatrix& matrix() const { return impl_->matrix; }
  const RationalMatrix& inverse() const { return impl_->inverse; }
  RationalVector column(std::size_t i) const { return impl_->matrix.column(i); }
  const Rational& determinant() const { return impl_->det; }
  // Smallest m with m >= bit length of every entry, and 2^m >= the norm and
  // the denominator lcm of every column.
  int bit_length_m() const { return impl_->m; }

  RationalVector apply(const RationalVector& coefficients) const {
    return impl_->matrix * coefficients;
  }
  // Same basis divided by k.
  Basis scaled_down(const Rational& k) const;

  bool operator==(const Basis& o) const;
  // Pointer identity of the shared storage; equal bases built separately
  // compare unequal here.
  const void* identity_tag() const { return impl_.get(); }

 private:
  struct Impl {
    RationalMatrix matrix;
    RationalMatrix inverse;
    Rational det;
    int m = 0;
  };
  std::shared_ptr<const Impl> impl_;
};

// The coset L - t, or a target t against L.
struct ShiftedLattice {
  Basis basis;
  RationalVector shift;
  std::string name;

  ShiftedLattice() = default;
  ShiftedLattice(Basis b, RationalVector t, std::string label = {});
  explicit ShiftedLattice(Basis b, std::string label = {});
  std::size_t dimension() const { return basis.dimension(); }
  ShiftedLattice scaled_down(const Rational& k) const;
};

struct BitLengthBounds {
  Rational lambda1_lo;
  Rational lambda1_hi;
  Rational mu_lo;
  Rational mu_hi;
};

RationalVector coords(const Basis& b, const RationalVector& x);
bool is_lattice_member(const Basis& b, const RationalVector& x);
// Throws std::invalid_argument for zero or non-member vectors.
bool is_primitive(const Basis& b, const RationalVector& x);
BitLengthBounds bit_length_bounds(const Basis& b);

}  // namespace dgslab

#endif  // DGSLAB_LATTICE_HPP_
