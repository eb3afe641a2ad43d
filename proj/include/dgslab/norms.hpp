#ifndef DGSLAB_NORMS_HPP_
#define DGSLAB_NORMS_HPP_

#include <string>

#include "dgslab/rational.hpp"

namespace dgslab {

enum class NormKind { l1, l2, linf, lq };

// A norm given by its unit ball. l1, l2 and linf compare exactly through a
// rational "key" (l2: squared norm, l1: sum of |x_i|, linf: max |x_i|).
// General lq evaluates in long double and refuses comparisons it cannot
// resolve.
class NormBody {
 public:
  static NormBody l1() { return NormBody(NormKind::l1, 1); }
  static NormBody l2() { return NormBody(NormKind::l2, 2); }
  static NormBody linf() { return NormBody(NormKind::linf, 0); }
  // q >= 1; q = 1 and q = 2 map to the exact kinds.
  static NormBody lq(long double q);

  NormKind kind() const { return kind_; }
  long double q() const { return q_; }
  bool exact() const { return kind_ != NormKind::lq; }
  std::string name() const;

  // Exact comparison key; throws for lq.
  Rational key(const RationalVector& x) const;
  // Key that corresponds to a radius: r^2 for l2, r otherwise.
  Rational key_of_radius(const Rational& r) const;
  // Radius r such that key_of_radius(r) == key, as a long double.
  long double radius_of_key(const Rational& key) const;
  long double value(const RationalVector& x) const;
  // c with ||u||_2^2 <= c * radius^2 whenever ||u||_K <= radius, in dimension n.
  long double l2_square_factor(std::size_t n) const;
  // Three-way comparison of ||x|| and ||y||; exact kinds only need keys, lq
  // throws std::domain_error when the values agree to within rounding.
  int compare(const RationalVector& x, const RationalVector& y) const;

  bool operator==(const NormBody& o) const { return kind_ == o.kind_ && q_ == o.q_; }

 private:
  NormBody(NormKind kind, long double q) : kind_(kind), q_(q) {}
  NormKind kind_;
  long double q_;
};

}  // namespace dgslab

#endif  // DGSLAB_NORMS_HPP_
