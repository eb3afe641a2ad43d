#include "dgslab/enumeration.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <string>

#include "dgslab/errors.hpp"

namespace dgslab {

namespace {

std::size_t g_dimension_cap = 0;

constexpr std::int64_t kEntryLimit = std::int64_t{1} << 50;
constexpr std::int64_t kOffsetLimit = std::int64_t{1} << 61;
constexpr std::size_t kMaxCloudPoints = 20'000'000;

std::int64_t to_int64_checked(const mpz_class& z, std::int64_t limit) {
  if (!z.fits_slong_p() || z >= limit || z <= -limit)
    throw ArithmeticRangeError("lattice entries exceed the 64-bit working range");
  return z.get_si();
}

}  // namespace

std::size_t dimension_cap() {
  if (g_dimension_cap == 0) {
    g_dimension_cap = 6;
    if (const char* env = std::getenv("DGSLAB_DIM_CAP")) {
      const long v = std::strtol(env, nullptr, 10);
      if (v > 0) g_dimension_cap = static_cast<std::size_t>(v);
    }
  }
  return g_dimension_cap;
}

void set_dimension_cap(std::size_t cap) { g_dimension_cap = cap; }

Int128 floor_scaled(const Rational& q, const mpz_class& scale) {
  mpz_class num = q.get_num() * scale;
  mpz_class f;
  mpz_fdiv_q(f.get_mpz_t(), num.get_mpz_t(), q.get_den_mpz_t());
  const mpz_class limit = mpz_class(1) << 125;
  if (f >= limit) return static_cast<Int128>(1) << 125;
  if (f <= -limit) return -(static_cast<Int128>(1) << 125);
  const bool neg = f < 0;
  mpz_class a = neg ? mpz_class(-f) : f;
  const mpz_class hi = a >> 64;
  const mpz_class lo = a - (hi << 64);
  Int128 r = static_cast<Int128>(mpz_get_ui(hi.get_mpz_t()));
  r <<= 64;
  r |= static_cast<Int128>(mpz_get_ui(lo.get_mpz_t()));
  return neg ? -r : r;
}

Rational int128_to_rational(Int128 x) {
  const bool neg = x < 0;
  unsigned __int128 a = neg ? static_cast<unsigned __int128>(-x) : static_cast<unsigned __int128>(x);
  mpz_class z = static_cast<unsigned long>(a >> 64);
  z <<= 64;
  z += static_cast<unsigned long>(a & 0xffffffffffffffffULL);
  if (neg) z = -z;
  return Rational(z);
}

IntegerFrame::IntegerFrame(const ShiftedLattice& lat) : lat_(lat), n_(lat.dimension()) {
  if (n_ > dimension_cap())
    throw DimensionCapExceeded("dimension " + std::to_string(n_) + " exceeds the enumeration cap " +
                               std::to_string(dimension_cap()));
  const RationalMatrix& b = lat.basis.matrix();
  scale_ = 1;
  for (std::size_t r = 0; r < n_; ++r) {
    for (std::size_t c = 0; c < n_; ++c) accumulate_denominator_lcm(scale_, b(r, c));
    accumulate_denominator_lcm(scale_, lat.shift[r]);
  }
  bz_.resize(n_ * n_);
  tz_.resize(n_);
  for (std::size_t r = 0; r < n_; ++r) {
    for (std::size_t c = 0; c < n_; ++c) {
      const Rational x = b(r, c) * scale_;
      bz_[r * n_ + c] = to_int64_checked(x.get_num(), kEntryLimit);
    }
    const Rational y = lat.shift[r] * scale_;
    tz_[r] = to_int64_checked(y.get_num(), kEntryLimit);
  }

  // Gram-Schmidt of the columns of D B.
  std::vector<long double> bstar(n_ * n_);  // column i stored at [i * n_ ...]
  bstar_sq_.assign(n_, 0);
  mu_.assign(n_ * n_, 0);
  tau_.assign(n_, 0);
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t r = 0; r < n_; ++r) bstar[i * n_ + r] = static_cast<long double>(bz_[r * n_ + i]);
    for (std::size_t k = 0; k < i; ++k) {
      long double dot = 0;
      for (std::size_t r = 0; r < n_; ++r)
        dot += static_cast<long double>(bz_[r * n_ + i]) * bstar[k * n_ + r];
      const long double m = dot / bstar_sq_[k];
      mu_[i * n_ + k] = m;
      for (std::size_t r = 0; r < n_; ++r) bstar[i * n_ + r] -= m * bstar[k * n_ + r];
    }
    long double sq = 0;
    for (std::size_t r = 0; r < n_; ++r) sq += bstar[i * n_ + r] * bstar[i * n_ + r];
    bstar_sq_[i] = sq;
  }
  for (std::size_t i = 0; i < n_; ++i) {
    long double dot = 0;
    for (std::size_t r = 0; r < n_; ++r) dot += static_cast<long double>(tz_[r]) * bstar[i * n_ + r];
    tau_[i] = dot / bstar_sq_[i];
  }
}

void IntegerFrame::offset(const std::int64_t* v, std::int64_t* u) const {
  for (std::size_t r = 0; r < n_; ++r) {
    Int128 s = -static_cast<Int128>(tz_[r]);
    for (std::size_t c = 0; c < n_; ++c) s += static_cast<Int128>(bz_[r * n_ + c]) * v[c];
    if (s >= kOffsetLimit || s <= -kOffsetLimit)
      throw ArithmeticRangeError("lattice point exceeds the 64-bit working range");
    u[r] = static_cast<std::int64_t>(s);
  }
}

Int128 IntegerFrame::key_of(NormKind kind, const std::int64_t* u, std::size_t n) {
  Int128 k = 0;
  switch (kind) {
    case NormKind::l2:
      for (std::size_t i = 0; i < n; ++i) k += static_cast<Int128>(u[i]) * u[i];
      return k;
    case NormKind::l1:
      for (std::size_t i = 0; i < n; ++i) k += u[i] < 0 ? -static_cast<Int128>(u[i]) : u[i];
      return k;
    case NormKind::linf:
      for (std::size_t i = 0; i < n; ++i) k = std::max<Int128>(k, u[i] < 0 ? -static_cast<Int128>(u[i]) : u[i]);
      return k;
    case NormKind::lq: break;
  }
  throw std::domain_error("no exact integer key for a general lq norm");
}

Int128 IntegerFrame::scaled_key(NormKind kind, const Rational& key) const {
  if (kind == NormKind::lq) throw std::domain_error("no exact integer key for a general lq norm");
  return floor_scaled(key, kind == NormKind::l2 ? mpz_class(scale_ * scale_) : scale_);
}

Rational IntegerFrame::unscaled_key(NormKind kind, Int128 key) const {
  const mpz_class s = kind == NormKind::l2 ? mpz_class(scale_ * scale_) : scale_;
  Rational q = int128_to_rational(key) / Rational(s);
  return q;
}

RationalVector IntegerFrame::point(const std::int64_t* v) const {
  RationalVector c(n_);
  for (std::size_t i = 0; i < n_; ++i) c[i] = Rational(static_cast<long>(v[i]));
  return lat_.basis.apply(c);
}

RationalVector IntegerFrame::point_offset(const std::int64_t* v) const {
  return point(v) - lat_.shift;
}

PointCloud::PointCloud(std::shared_ptr<const IntegerFrame> frame, NormBody norm, Int128 key_bound,
                       bool exclude_zero_offset)
    : frame_(std::move(frame)), norm_(norm), key_bound_(key_bound), n_(frame_->dimension()) {
  if (!norm_.exact()) throw std::domain_error("point clouds need an exact norm");
  const NormKind kind = norm_.kind();
  Int128 l2_bound = key_bound;
  if (kind == NormKind::l1) l2_bound = key_bound * key_bound;
  if (kind == NormKind::linf) l2_bound = key_bound * key_bound * static_cast<Int128>(n_);
  if (key_bound < 0) l2_bound = -1;

  std::vector<std::int64_t> coords, offsets;
  std::vector<Int128> keys;
  frame_->enumerate_l2(l2_bound, [&](const std::int64_t* v, const std::int64_t* u, Int128 l2key) {
    if (exclude_zero_offset && l2key == 0) return;
    const Int128 k = kind == NormKind::l2 ? l2key : IntegerFrame::key_of(kind, u, n_);
    if (k > key_bound) return;
    if (keys.size() >= kMaxCloudPoints) throw std::length_error("point cloud exceeds the size limit");
    coords.insert(coords.end(), v, v + n_);
    offsets.insert(offsets.end(), u, u + n_);
    keys.push_back(k);
  });

  std::vector<std::size_t> order(keys.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (keys[a] != keys[b]) return keys[a] < keys[b];
    return std::lexicographical_compare(offsets.begin() + a * n_, offsets.begin() + (a + 1) * n_,
                                        offsets.begin() + b * n_, offsets.begin() + (b + 1) * n_);
  });
  coords_.resize(coords.size());
  offsets_.resize(offsets.size());
  keys_.resize(keys.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    const std::size_t j = order[i];
    std::copy_n(coords.begin() + j * n_, n_, coords_.begin() + i * n_);
    std::copy_n(offsets.begin() + j * n_, n_, offsets_.begin() + i * n_);
    keys_[i] = keys[j];
  }
}

std::size_t PointCloud::count_within(Int128 k) const {
  if (k > key_bound_) throw std::out_of_range("count above the enumerated bound");
  return static_cast<std::size_t>(std::upper_bound(keys_.begin(), keys_.end(), k) - keys_.begin());
}

}  // namespace dgslab
