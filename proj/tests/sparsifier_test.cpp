#include "dgslab/sparsifier.hpp"

#include <cmath>
#include <map>
#include <set>

#include "dgslab/exact_oracles.hpp"
#include "dgslab/oracles.hpp"
#include "dgslab/primes.hpp"
#include "gtest/gtest.h"
#include "test_support.hpp"

namespace dgslab {
namespace {

using testing::ivec;

bool same_lattice(const Basis& a, const Basis& b) {
  for (std::size_t i = 0; i < a.dimension(); ++i) {
    if (!is_lattice_member(b, a.column(i))) return false;
    if (!is_lattice_member(a, b.column(i))) return false;
  }
  return true;
}

// Basis B U of L', with U = (e_i - z_i e_j for i != j, p e_j) after scaling z
// so that its last nonzero entry z_j is 1.
Basis sublattice_by_columns(const Basis& b, std::uint64_t p, std::vector<std::uint64_t> z) {
  const std::size_t n = b.dimension();
  std::size_t j = n;
  for (std::size_t i = 0; i < n; ++i)
    if (z[i] % p) j = i;
  if (j == n) return b;
  std::uint64_t inv = 1;
  while ((inv * (z[j] % p)) % p != 1) ++inv;
  for (auto& x : z) x = (x % p) * inv % p;
  std::vector<RationalVector> cols;
  for (std::size_t i = 0; i < n; ++i) {
    RationalVector u(n);
    if (i == j) {
      u[j] = Rational(static_cast<unsigned long>(p));
    } else {
      u[i] = 1;
      u[j] = -Rational(static_cast<unsigned long>(z[i]));
    }
    cols.push_back(b.apply(u));
  }
  return Basis(cols);
}

TEST(PrimesTest, AgreesWithSieve) {
  const std::size_t limit = 100000;
  std::vector<bool> composite(limit, false);
  for (std::size_t i = 2; i * i < limit; ++i)
    if (!composite[i])
      for (std::size_t j = i * i; j < limit; j += i) composite[j] = true;
  for (std::size_t i = 0; i < limit; ++i) ASSERT_EQ(is_prime(i), i >= 2 && !composite[i]) << i;
}

TEST(PrimesTest, LargeValuesAndIntervals) {
  EXPECT_TRUE(is_prime((std::uint64_t{1} << 61) - 1));
  EXPECT_FALSE(is_prime((std::uint64_t{1} << 61) + 1));
  EXPECT_FALSE(is_prime(3215031751ULL));  // strong pseudoprime to bases 2, 3, 5, 7
  EXPECT_FALSE(is_prime(561));
  EXPECT_EQ(prime_in_interval(200, 400), 211u);
  EXPECT_EQ(prime_in_interval(101, 101), 101u);
  EXPECT_THROW(prime_in_interval(24, 28), std::invalid_argument);
  EXPECT_EQ(prime_between(9.5L, 20.0L), 11u);
}

TEST(SparsifyBasisTest, Examples) {
  const Basis i2 = Basis::identity(2);
  EXPECT_EQ(sparsify_basis(i2, 3, {0, 0}), i2);
  const Basis b = sparsify_basis(i2, 3, {1, 2});
  EXPECT_TRUE(same_lattice(b, testing::columns({{1, 1}, {0, 3}})));
  EXPECT_EQ(abs_q(b.determinant()), Rational(3));
  EXPECT_THROW(sparsify_basis(i2, 4, {1, 2}), std::invalid_argument);
  EXPECT_THROW(sparsify_basis(i2, 3, {1, 2, 0}), std::invalid_argument);
}

TEST(SparsifyBasisTest, MatchesColumnOperationsOnCorpus) {
  Rng rng(11);
  for (const auto& entry : testing::corpus()) {
    const std::size_t n = entry.basis.dimension();
    for (std::uint64_t p : {2u, 3u, 7u, 101u}) {
      for (int trial = 0; trial < 6; ++trial) {
        std::vector<std::uint64_t> z(n);
        for (auto& x : z) x = rng.uniform_below(p);
        if (trial == 0) std::fill(z.begin(), z.end(), 0);
        const Basis sub = sparsify_basis(entry.basis, p, z);
        const bool zero = std::all_of(z.begin(), z.end(), [](auto x) { return x == 0; });
        EXPECT_EQ(abs_q(sub.determinant() / entry.basis.determinant()),
                  zero ? Rational(1) : Rational(static_cast<unsigned long>(p)));
        const SparsifiedPair pair(entry.basis, p, z, {});
        for (std::size_t i = 0; i < n; ++i) {
          EXPECT_TRUE(is_lattice_member(entry.basis, sub.column(i)));
          EXPECT_TRUE(pair.in_coset(sub.column(i)));
        }
        EXPECT_TRUE(same_lattice(sub, sublattice_by_columns(entry.basis, p, z))) << entry.name;
      }
    }
  }
}

// <z, v> is uniform over Z_p for v != 0, so it vanishes for exactly p^{n-1}
// of the p^n choices of z.
TEST(SparsificationEventTest, SingleVectorIsExactlyOneOverP) {
  for (std::uint64_t p : {2u, 3u, 5u, 7u, 11u, 13u})
    for (std::size_t n = 1; n <= 3; ++n)
      for (int k = 1; k < 6; ++k) {
        std::vector<std::int64_t> v(n);
        for (std::size_t j = 0; j < n; ++j) v[j] = (k * static_cast<int>(j + 2) + 1) % static_cast<int>(p + 1) - 1;
        if (std::all_of(v.begin(), v.end(), [p](auto x) { return x % static_cast<std::int64_t>(p) == 0; })) continue;
        EXPECT_EQ(sparsification_event(p, v, {}, false).probability(), frac(1, static_cast<long>(p)));
      }
}

// Closed form for the shifted event: for z != 0 the value <z, c> is uniform,
// so the event holds for p^{n-1} choices of c exactly when <z, x - y_i> != 0
// for every i.
std::uint64_t shifted_closed_form(std::uint64_t p, const std::vector<std::int64_t>& x,
                                  const std::vector<std::vector<std::int64_t>>& ys) {
  const std::size_t n = x.size();
  std::uint64_t per = 1;
  for (std::size_t j = 0; j < n; ++j) per *= p;
  std::uint64_t hits = ys.empty() ? per : 0;
  std::vector<std::int64_t> z(n);
  for (std::uint64_t k = 1; k < per; ++k) {
    std::uint64_t t = k;
    for (std::size_t j = 0; j < n; ++j, t /= p) z[j] = static_cast<std::int64_t>(t % p);
    bool ok = true;
    for (const auto& y : ys) {
      std::int64_t s = 0;
      for (std::size_t j = 0; j < n; ++j) s += z[j] * (x[j] - y[j]);
      if (s % static_cast<std::int64_t>(p) == 0) ok = false;
    }
    if (ok) hits += per / p;
  }
  return hits;
}

struct VectorSet {
  std::vector<std::int64_t> x;
  std::vector<std::vector<std::int64_t>> ys;
};

std::vector<VectorSet> vector_sets(std::size_t n) {
  if (n == 2) return {{{1, 0}, {{0, 1}, {1, 1}}}, {{2, 1}, {{1, 0}, {0, 1}, {1, -1}}}, {{1, 2}, {{-1, 1}}}};
  return {{{1, 0, 0}, {{0, 1, 0}, {0, 0, 1}, {1, 1, 0}}},
          {{1, 1, 1}, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, -1, 0}}},
          {{2, 0, 1}, {{1, 1, 1}}}};
}

bool scalar_multiple_mod(const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b, std::int64_t p) {
  for (std::int64_t k = 0; k < p; ++k) {
    bool all = true;
    for (std::size_t j = 0; j < a.size(); ++j)
      if (((a[j] - k * b[j]) % p + p) % p != 0) all = false;
    if (all) return true;
  }
  return false;
}

TEST(SparsificationEventTest, UnshiftedWithinAlmostIndependenceBounds) {
  for (std::uint64_t p : {3u, 5u, 7u})
    for (std::size_t n : {2u, 3u})
      for (const auto& set : vector_sets(n)) {
        bool ok = true;
        for (const auto& y : set.ys) ok = ok && !scalar_multiple_mod(set.x, y, static_cast<std::int64_t>(p));
        if (!ok) continue;
        const Rational pr = sparsification_event(p, set.x, set.ys, false).probability();
        const Rational inv = frac(1, static_cast<long>(p));
        const Rational big_n(static_cast<long>(set.ys.size()));
        EXPECT_LE(inv - big_n * inv * inv, pr);
        EXPECT_LE(pr, inv);
      }
}

TEST(SparsificationEventTest, ShiftedMatchesClosedFormAndBounds) {
  for (std::uint64_t p : {3u, 5u, 7u})
    for (std::size_t n : {2u, 3u})
      for (const auto& set : vector_sets(n)) {
        const EventCount e = sparsification_event(p, set.x, set.ys, true);
        EXPECT_EQ(e.hits, shifted_closed_form(p, set.x, set.ys));
        const Rational inv = frac(1, static_cast<long>(p));
        Rational inv_n = 1, inv_n1 = 1;
        for (std::size_t j = 0; j < n; ++j) inv_n *= inv;
        for (std::size_t j = 0; j + 1 < n; ++j) inv_n1 *= inv;
        const Rational big_n(static_cast<long>(set.ys.size()));
        EXPECT_LE(inv - big_n * inv * inv - big_n * inv_n1, e.probability());
        EXPECT_LE(e.probability(), inv + inv_n);
      }
}

TEST(SampleSparsifierTest, ZIsUniformAndShiftIsMember) {
  Rng rng(5);
  const Basis b = testing::random3_basis();
  const std::uint64_t p = 7;
  std::vector<std::vector<int>> counts(3, std::vector<int>(p, 0));
  const int draws = 14000;
  for (int i = 0; i < draws; ++i) {
    const SparsifiedPair pair = sample_shifted_sparsifier(b, p, rng);
    for (std::size_t j = 0; j < 3; ++j) ++counts[j][pair.z()[j]];
    if (i < 50) EXPECT_TRUE(is_lattice_member(b, pair.shift_vector()));
  }
  // Chi-square with 6 degrees of freedom; 22.46 is the 0.999 quantile.
  for (const auto& row : counts) {
    double chi = 0;
    const double e = static_cast<double>(draws) / p;
    for (int c : row) chi += (c - e) * (c - e) / e;
    EXPECT_LT(chi, 22.46);
  }
  EXPECT_THROW(sample_shifted_sparsifier(b, 9, rng), std::invalid_argument);
  EXPECT_THROW(sample_unshifted_sparsifier(b, 97, rng), std::invalid_argument);
  const SparsifiedPair u = sample_unshifted_sparsifier(b, 101, rng);
  EXPECT_FALSE(u.shifted());
  EXPECT_TRUE(u.shift_vector().is_zero());
}

// x = e1 against competitors e2, e3, e1 + e2 in Z^3 with p = 11.
TEST(SampleSparsifierTest, ShiftedGoodEventMonteCarlo) {
  Rng rng(21);
  const Basis b = Basis::identity(3);
  const std::uint64_t p = 11;
  const std::vector<std::int64_t> x = {1, 0, 0};
  const std::vector<std::vector<std::int64_t>> ys = {{0, 1, 0}, {0, 0, 1}, {1, 1, 0}};
  const int trials = 100000;
  int good = 0;
  for (int i = 0; i < trials; ++i) {
    const SparsifiedPair pair = sample_shifted_sparsifier(b, p, rng);
    bool ok = pair.in_coset(x.data());
    for (const auto& y : ys) ok = ok && !pair.in_coset(y.data());
    good += ok;
  }
  const double pe = static_cast<double>(good) / trials;
  const double lo = 1.0 / 11 - 3.0 / 121 - 3.0 / 121, hi = 1.0 / 11 + 1.0 / 1331;
  const double se = std::sqrt(hi * (1 - hi) / trials);
  EXPECT_GE(pe, lo - 3 * se);
  EXPECT_LE(pe, hi + 3 * se);
}

// Pr[SVP(L') = +-e1] for Z^2 and p = 101 lies in [1/p - 1/p^2, 1/p].
TEST(SampleSparsifierTest, UnshiftedShortestVectorMonteCarlo) {
  Rng rng(3);
  const Basis b = Basis::identity(2);
  auto oracle = make_scan_oracle(ShiftedLattice(b), NormBody::l2());
  const std::uint64_t p = 101;
  const int trials = 100000;
  int hits = 0;
  for (int i = 0; i < trials; ++i) {
    const auto y = oracle->shortest(sample_unshifted_sparsifier(b, p, rng), std::nullopt);
    ASSERT_TRUE(y.has_value());
    if (std::abs(y->coords[0]) == 1 && y->coords[1] == 0) ++hits;
  }
  const double pe = static_cast<double>(hits) / trials;
  const double lo = 1.0 / 101 - 1.0 / (101.0 * 101), hi = 1.0 / 101;
  const double se = std::sqrt(hi * (1 - hi) / trials);
  EXPECT_GE(pe, lo - 3 * se);
  EXPECT_LE(pe, hi + 3 * se);
}

// Two primitive vectors proportional mod p force many primitive vectors
// below the longer one: xi(L, ||x1||) > p / (20 log p).
TEST(SparsificationEventTest, ProportionalPrimitivePairsNeedManyPrimitiveVectors) {
  const std::uint64_t p = 101;
  const double need = static_cast<double>(p) / (20 * std::log(static_cast<double>(p)));
  for (const auto& entry : testing::corpus()) {
    const std::size_t n = entry.basis.dimension();
    if (n < 2) continue;
    const BallEnumeration ball = enumerate_ball(ShiftedLattice(entry.basis), Rational(n == 2 ? 11000 : 1400));
    // Group primitive coefficient vectors by their projective class mod p.
    std::map<std::vector<std::int64_t>, std::vector<std::size_t>> classes;
    for (std::size_t i = 0; i < ball.size(); ++i) {
      const auto& v = ball.points[i].coords;
      if (std::all_of(v.begin(), v.end(), [](auto x) { return x == 0; })) continue;
      if (!is_primitive(entry.basis, ball.points[i].point)) continue;
      std::vector<std::int64_t> r(n);
      for (std::size_t j = 0; j < n; ++j) r[j] = ((v[j] % 101) + 101) % 101;
      std::size_t lead = 0;
      while (r[lead] == 0) ++lead;
      std::int64_t inv = 1;
      while ((inv * r[lead]) % 101 != 1) ++inv;
      for (auto& x : r) x = x * inv % 101;
      classes[r].push_back(i);
    }
    std::size_t pairs = 0;
    for (const auto& [key, members] : classes) {
      for (std::size_t a = 0; a < members.size() && pairs < 20; ++a)
        for (std::size_t b = 0; b < members.size() && pairs < 20; ++b) {
          const auto& x1 = ball.points[members[a]];
          const auto& x2 = ball.points[members[b]];
          if (x1.key < x2.key || x1.point == x2.point || x1.point == -x2.point) continue;
          ++pairs;
          EXPECT_GT(static_cast<double>(exact_primitive_count(entry.basis, x1.key)), need) << entry.name;
        }
    }
    EXPECT_GT(pairs, 0u) << entry.name;
  }
}

}  // namespace
}  // namespace dgslab
