#include "dgslab/norms.hpp"

#include <algorithm>
#include <cmath>
#include <vector>
#include <stdexcept>

namespace dgslab {

NormBody NormBody::lq(long double q) {
  if (!(q >= 1)) throw std::invalid_argument("lq norm needs q >= 1");
  if (q == 1) return l1();
  if (q == 2) return l2();
  return NormBody(NormKind::lq, q);
}

std::string NormBody::name() const {
  switch (kind_) {
    case NormKind::l1: return "l1";
    case NormKind::l2: return "l2";
    case NormKind::linf: return "linf";
    case NormKind::lq: return "l" + std::to_string(static_cast<double>(q_));
  }
  return "?";
}

Rational NormBody::key(const RationalVector& x) const {
  Rational k = 0;
  switch (kind_) {
    case NormKind::l2: return x.norm_sq();
    case NormKind::l1:
      for (const auto& c : x) k += abs_q(c);
      return k;
    case NormKind::linf:
      for (const auto& c : x) k = std::max(k, abs_q(c));
      return k;
    case NormKind::lq: break;
  }
  throw std::domain_error("no exact key for " + name());
}

Rational NormBody::key_of_radius(const Rational& r) const {
  if (kind_ == NormKind::lq) throw std::domain_error("no exact key for " + name());
  return kind_ == NormKind::l2 ? Rational(r * r) : r;
}

long double NormBody::radius_of_key(const Rational& key) const {
  const long double k = to_long_double(key);
  switch (kind_) {
    case NormKind::l2: return std::sqrt(k);
    case NormKind::lq: return std::pow(k, 1.0L / q_);
    default: return k;
  }
}

long double NormBody::value(const RationalVector& x) const {
  long double s = 0;
  switch (kind_) {
    case NormKind::l2:
      return std::sqrt(to_long_double(x.norm_sq()));
    case NormKind::l1:
      return to_long_double(key(x));
    case NormKind::linf:
      return to_long_double(key(x));
    case NormKind::lq:
      for (const auto& c : x) s += std::pow(std::fabs(to_long_double(c)), q_);
      return std::pow(s, 1.0L / q_);
  }
  return s;
}

long double NormBody::l2_square_factor(std::size_t n) const {
  const long double dn = static_cast<long double>(n);
  switch (kind_) {
    case NormKind::l1:
    case NormKind::l2: return 1;
    case NormKind::linf: return dn;
    case NormKind::lq:
      // ||u||_2 <= ||u||_q for q <= 2, and <= n^(1/2 - 1/q) ||u||_q above.
      return q_ <= 2 ? 1.0L : std::pow(dn, 1.0L - 2.0L / q_);
  }
  return dn;
}

int NormBody::compare(const RationalVector& x, const RationalVector& y) const {
  if (exact()) return cmp(key(x), key(y));
  const long double a = value(x), b = value(y);
  const long double tol = 1e-15L * std::max({a, b, 1.0L});
  if (std::fabs(a - b) <= tol) {
    // Equal multisets of |coordinates| give equal lq norms exactly.
    std::vector<Rational> ax, ay;
    for (const auto& c : x) ax.push_back(abs_q(c));
    for (const auto& c : y) ay.push_back(abs_q(c));
    std::sort(ax.begin(), ax.end());
    std::sort(ay.begin(), ay.end());
    if (ax == ay) return 0;
    throw std::domain_error("lq comparison is within rounding");
  }
  return a < b ? -1 : 1;
}

}  // namespace dgslab
