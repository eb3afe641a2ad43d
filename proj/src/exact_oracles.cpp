#include "dgslab/exact_oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "dgslab/errors.hpp"

namespace dgslab {

namespace {

std::vector<std::int64_t> rounded_coords(const ShiftedLattice& lat) {
  const RationalVector c = coords(lat.basis, lat.shift);
  std::vector<std::int64_t> v(c.dimension());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Rational r = floor_q(c[i] + frac(1, 2));
    if (!r.get_num().fits_slong_p()) throw ArithmeticRangeError("target too far out");
    v[i] = r.get_num().get_si();
  }
  return v;
}

Rational distance_key(const ShiftedLattice& lat, const std::vector<std::int64_t>& v, const NormBody& norm) {
  RationalVector c(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) c[i] = Rational(static_cast<long>(v[i]));
  return norm.key(lat.basis.apply(c) - lat.shift);
}

BallPoint make_point(const PointCloud& cloud, std::size_t i) {
  const IntegerFrame& f = cloud.frame();
  BallPoint p;
  p.coords.assign(cloud.coords(i), cloud.coords(i) + cloud.dimension());
  p.point = f.point(cloud.coords(i));
  p.offset = p.point - f.lattice().shift;
  p.key = f.unscaled_key(cloud.norm().kind(), cloud.key(i));
  return p;
}

bool parallel(const std::int64_t* a, const std::int64_t* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (static_cast<Int128>(a[i]) * b[j] != static_cast<Int128>(a[j]) * b[i]) return false;
  return true;
}

bool primitive_coords(const std::int64_t* v, std::size_t n) {
  std::int64_t g = 0;
  for (std::size_t i = 0; i < n; ++i) g = std::gcd(g, v[i] < 0 ? -v[i] : v[i]);
  return g == 1;
}

BallEnumeration enumerate_lq(const ShiftedLattice& lat, const Rational& radius, const NormBody& norm) {
  const long double r = to_long_double(radius);
  const Rational l2_sq = rational_from_long_double(r * r * norm.l2_square_factor(lat.dimension()) * (1 + 1e-9L)) +
                         frac(1, 1000000000);
  BallEnumeration all = enumerate_ball(lat, l2_sq);
  BallEnumeration out{lat.shift, radius, norm, {}};
  for (auto& p : all.points) {
    const long double v = norm.value(p.offset);
    if (std::fabs(v - r) <= 1e-15L * std::max(r, 1.0L))
      throw std::domain_error("lq ball membership is within rounding");
    if (v < r) out.points.push_back(std::move(p));
  }
  std::stable_sort(out.points.begin(), out.points.end(), [&](const BallPoint& a, const BallPoint& b) {
    const int c = norm.compare(a.offset, b.offset);
    return c != 0 ? c < 0 : a.point < b.point;
  });
  return out;
}

}  // namespace

long double compensated_sum(const std::vector<long double>& xs) {
  long double sum = 0, comp = 0;
  for (long double x : xs) {
    const long double t = sum + x;
    if (std::fabs(sum) >= std::fabs(x)) comp += (sum - t) + x;
    else comp += (x - t) + sum;
    sum = t;
  }
  return sum + comp;
}

BallEnumeration enumerate_ball(const ShiftedLattice& lat, const Rational& radius_sq) {
  return enumerate_ball(lat, radius_sq, NormBody::l2());
}

BallEnumeration enumerate_ball(const ShiftedLattice& lat, const Rational& radius_key, const NormBody& norm) {
  if (radius_key < 0) throw std::invalid_argument("negative radius");
  if (!norm.exact()) return enumerate_lq(lat, radius_key, norm);
  auto frame = std::make_shared<const IntegerFrame>(lat);
  const PointCloud cloud(frame, norm, frame->scaled_key(norm.kind(), radius_key), false);
  BallEnumeration out{lat.shift, radius_key, norm, {}};
  out.points.reserve(cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) out.points.push_back(make_point(cloud, i));
  return out;
}

RationalVector solve_cvp(const ShiftedLattice& lat) {
  auto frame = std::make_shared<const IntegerFrame>(lat);
  const auto v0 = rounded_coords(lat);
  const Rational bound = distance_key(lat, v0, NormBody::l2());
  const PointCloud cloud(frame, NormBody::l2(), frame->scaled_key(NormKind::l2, bound), false);
  return frame->point(cloud.coords(0));
}

RationalVector solve_cvp(const ShiftedLattice& lat, const NormBody& norm) {
  if (norm.kind() == NormKind::l2) return solve_cvp(lat);
  const auto v0 = rounded_coords(lat);
  if (!norm.exact()) {
    RationalVector c(v0.size());
    for (std::size_t i = 0; i < v0.size(); ++i) c[i] = Rational(static_cast<long>(v0[i]));
    const long double r = norm.value(lat.basis.apply(c) - lat.shift);
    const Rational radius = rational_from_long_double(r * (1 + 1e-9L)) + frac(1, 1000000000);
    const BallEnumeration ball = enumerate_ball(lat, radius, norm);
    return ball.points.front().point;
  }
  auto frame = std::make_shared<const IntegerFrame>(lat);
  const Rational bound = distance_key(lat, v0, norm);
  const PointCloud cloud(frame, norm, frame->scaled_key(norm.kind(), bound), false);
  return frame->point(cloud.coords(0));
}

Rational cvp_distance_sq(const ShiftedLattice& lat) {
  return (solve_cvp(lat) - lat.shift).norm_sq();
}

SvpResult solve_svp(const Basis& b) {
  const std::size_t n = b.dimension();
  Rational min_sq = b.column(0).norm_sq(), max_sq = min_sq;
  for (std::size_t i = 1; i < n; ++i) {
    const Rational q = b.column(i).norm_sq();
    min_sq = std::min(min_sq, q);
    max_sq = std::max(max_sq, q);
  }
  auto frame = std::make_shared<const IntegerFrame>(ShiftedLattice(b));
  // Every basis vector is independent of the shortest vector or equal to it,
  // so the ball of the longest basis vector also contains a lambda2 witness.
  const PointCloud cloud(frame, NormBody::l2(), frame->scaled_key(NormKind::l2, n > 1 ? max_sq : min_sq), true);
  SvpResult out;
  out.vector = frame->point(cloud.coords(0));
  out.lambda1_sq = frame->unscaled_key(NormKind::l2, cloud.key(0));
  if (n > 1) {
    for (std::size_t i = 1; i < cloud.size(); ++i) {
      if (!parallel(cloud.coords(0), cloud.coords(i), n)) {
        out.lambda2_sq = frame->unscaled_key(NormKind::l2, cloud.key(i));
        break;
      }
    }
  }
  return out;
}

RationalVector shortest_vector(const Basis& b, const NormBody& norm) {
  if (norm.kind() == NormKind::l2) return solve_svp(b).vector;
  if (!norm.exact()) throw std::domain_error("shortest_vector needs an exact norm");
  Rational bound = norm.key(b.column(0));
  for (std::size_t i = 1; i < b.dimension(); ++i) bound = std::min(bound, norm.key(b.column(i)));
  auto frame = std::make_shared<const IntegerFrame>(ShiftedLattice(b));
  const PointCloud cloud(frame, norm, frame->scaled_key(norm.kind(), bound), true);
  return frame->point(cloud.coords(0));
}

std::size_t exact_count(const ShiftedLattice& lat, const Rational& radius_sq) {
  if (radius_sq < 0) return 0;
  auto frame = std::make_shared<const IntegerFrame>(lat);
  return PointCloud(frame, NormBody::l2(), frame->scaled_key(NormKind::l2, radius_sq), false).size();
}

std::size_t exact_primitive_count(const Basis& b, const Rational& radius_sq) {
  return exact_primitive_count(b, radius_sq, NormBody::l2());
}

std::size_t exact_primitive_count(const Basis& b, const Rational& radius_key, const NormBody& norm) {
  if (radius_key < 0) return 0;
  auto frame = std::make_shared<const IntegerFrame>(ShiftedLattice(b));
  const PointCloud cloud(frame, norm, frame->scaled_key(norm.kind(), radius_key), true);
  std::size_t count = 0;
  for (std::size_t i = 0; i < cloud.size(); ++i)
    if (primitive_coords(cloud.coords(i), b.dimension())) ++count;
  return count / 2;
}

ExactDistribution::ExactDistribution(std::vector<RationalVector> support, std::vector<long double> weights,
                                     NormBody norm, Rational support_key_bound, long double truncated_mass_bound)
    : support_(std::move(support)), norm_(norm), key_bound_(std::move(support_key_bound)),
      tail_(truncated_mass_bound) {
  if (weights.size() != support_.size() || support_.empty())
    throw std::invalid_argument("support and weights disagree");
  const long double total = compensated_sum(weights);
  probability_.resize(weights.size());
  cumulative_.resize(weights.size());
  long double run = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    probability_[i] = weights[i] / total;
    run += probability_[i];
    cumulative_[i] = run;
    index_.emplace(support_[i].key(), i);
  }
}

long double ExactDistribution::probability_of(const RationalVector& y) const {
  return probability_of_key(y.key());
}

long double ExactDistribution::probability_of_key(const std::string& key) const {
  const auto it = index_.find(key);
  return it == index_.end() ? 0.0L : probability_[it->second];
}

bool ExactDistribution::inside_support_bound(const RationalVector& y) const {
  return norm_.key(y) <= key_bound_;
}

std::size_t ExactDistribution::sample_index(Rng& rng) const { return rng.pick_cumulative(cumulative_); }

RationalVector ExactDistribution::sample(Rng& rng) const { return support_[sample_index(rng)]; }

long double gaussian_tail_bound(long double dist, long double s, std::size_t n, long double r) {
  const long double need = tail_hypothesis_radius(dist, s, n);
  if (r < need * (1 - 1e-12L))
    throw PreconditionViolated("radius below the tail-bound hypothesis");
  return std::exp(-r * r * static_cast<long double>(n));
}

long double tail_hypothesis_radius(long double dist, long double s, std::size_t n) {
  return 10.0L * std::sqrt(std::log(10.0L + dist / (s * std::sqrt(static_cast<long double>(n)))));
}

long double gaussian_tail_bound_general(long double dist, long double s, std::size_t n, long double r) {
  const long double pi = std::numbers::pi_v<long double>;
  if (r < 1.0L / std::sqrt(2 * pi) * (1 - 1e-12L))
    throw PreconditionViolated("radius below 1/sqrt(2 pi)");
  const long double dn = static_cast<long double>(n);
  const long double rp2 = dist * dist / (s * s * dn) + r * r;
  const long double log_base = 0.5L * std::log(2 * pi * std::numbers::e_v<long double> * rp2) - pi * r * r;
  return std::exp(dn * log_base);
}

ExactDistribution exact_dgs(const ShiftedLattice& lat, const Rational& s, long double tail_eps) {
  if (s <= 0) throw std::invalid_argument("s must be positive");
  if (!(tail_eps > 0)) throw std::invalid_argument("tail_eps must be positive");
  const std::size_t n = lat.dimension();
  const Rational d_sq = cvp_distance_sq(lat);
  const long double d = std::sqrt(to_long_double(d_sq));
  const long double sl = to_long_double(s);
  const long double pi = std::numbers::pi_v<long double>;
  const long double step = 1.0L / (4.0L * std::sqrt(static_cast<long double>(n)));
  long double r = 1.0L / std::sqrt(2 * pi);
  long double tail = gaussian_tail_bound_general(d, sl, n, r);
  while (!(tail < tail_eps)) {
    r += step;
    tail = gaussian_tail_bound_general(d, sl, n, r);
  }
  // Radius rounded up to a rational so the listed support is a superset.
  const Rational extra = rational_from_long_double(r * r * sl * sl * static_cast<long double>(n) * (1 + 1e-15L)) +
                         frac(1, 1000000000000L);
  const Rational radius_sq = d_sq + extra;
  const BallEnumeration ball = enumerate_ball(lat, radius_sq);
  std::vector<RationalVector> support;
  std::vector<long double> weights;
  support.reserve(ball.size());
  weights.reserve(ball.size());
  const Rational s_sq = s * s;
  for (const auto& p : ball.points) {
    const Rational excess = (p.key - d_sq) / s_sq;
    weights.push_back(std::exp(-pi * to_long_double(excess)));
    support.push_back(p.offset);
  }
  (void)tail;
  return ExactDistribution(std::move(support), std::move(weights), NormBody::l2(), radius_sq, tail_eps);
}

}  // namespace dgslab
