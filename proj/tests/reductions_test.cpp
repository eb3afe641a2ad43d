#include "dgslab/reductions.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "dgslab/errors.hpp"
#include "dgslab/exact_oracles.hpp"
#include "dgslab/gaussian.hpp"
#include "test_support.hpp"

namespace dgslab {
namespace {

using testing::ivec;
using testing::vec;

long double se(long double p, std::uint64_t n) { return std::sqrt(p * (1 - p) / static_cast<long double>(n)); }

bool is_closest(const ShiftedLattice& lat, const RationalVector& x) {
  return (x - lat.shift).norm_sq() == cvp_distance_sq(lat);
}

TEST(CvpParameters, Z2) {
  const ShiftedLattice lat(Basis::identity(2), vec({"1/5", "7/10"}));
  const auto p = cvp_parameters(lat, 3);
  EXPECT_EQ(p.q, Rational(10));
  EXPECT_EQ(p.d, bit_length_bounds(lat.basis).mu_hi);
  const long double denom = 100.0L * 3 * 2 * 10 * std::log(10 + to_long_double(p.d));
  EXPECT_EQ(p.s, frac(1, static_cast<long>(std::ceil(denom))));
  EXPECT_THROW(cvp_parameters(lat, 1), PreconditionViolated);
}

TEST(CvpViaDgs, TargetOnTheLattice) {
  const ShiftedLattice lat(Basis::identity(2), ivec({1, 2}));
  auto oracle = exact_dgs_handle(OracleKind::dgs);
  Rng rng(1);
  for (int i = 0; i < 200; ++i) EXPECT_EQ(cvp_via_dgs(lat, 3, oracle, rng), ivec({1, 2}));
  EXPECT_EQ(oracle.log->calls, 200u);
  EXPECT_EQ(oracle.log->lattices, std::set<std::string>{lattice_key(lat)});
}

TEST(CvpViaDgs, ExactOracleSucceedsOnTheCorpus) {
  const std::uint64_t trials = 2000, f = 3;
  const long double bound = 1.0L / (2 * f * f);
  const std::vector<const char*> coords = {"1/5", "7/10", "5/4"};
  for (const auto& entry : testing::corpus()) {
    RationalVector t(entry.basis.dimension());
    for (std::size_t i = 0; i < t.dimension(); ++i) t[i] = testing::q(coords[i]);
    const ShiftedLattice lat(entry.basis, t);
    auto oracle = exact_dgs_handle(OracleKind::dgs);
    Rng rng(2, entry.name);
    std::uint64_t ok = 0;
    for (std::uint64_t i = 0; i < trials; ++i) {
      const RationalVector x = cvp_via_dgs(lat, f, oracle, rng);
      ASSERT_TRUE(is_lattice_member(lat.basis, x)) << entry.name;
      ok += is_closest(lat, x);
    }
    EXPECT_GE(static_cast<long double>(ok) / trials, bound - 3 * se(bound, trials)) << entry.name;
    EXPECT_EQ(ok, trials) << entry.name;  // all mass sits on closest points at this s
    EXPECT_EQ(oracle.log->lattices.size(), 1u);
  }
}

TEST(CvpViaDgs, AdversarialOracleStillMeetsTheBound) {
  const ShiftedLattice lat(Basis::identity(2), vec({"1/5", "7/10"}));
  const std::uint64_t f = 3, trials = 4000;
  auto oracle = adversarial_handle(exact_dgs_handle(OracleKind::dgs), 1.0L / f);
  Rng rng(3);
  std::uint64_t ok = 0;
  for (std::uint64_t i = 0; i < trials; ++i) {
    const RationalVector x = cvp_via_dgs(lat, f, oracle, rng);
    ASSERT_TRUE(is_lattice_member(lat.basis, x));
    ok += is_closest(lat, x);
  }
  const long double freq = static_cast<long double>(ok) / trials;
  EXPECT_NEAR(static_cast<double>(freq), 1.0 / 3, 3 * static_cast<double>(se(1.0L / 3, trials)));
  EXPECT_GE(freq, 1.0L / 18);
}

TEST(CvpViaDgs, AmplificationReachesDelta) {
  const ShiftedLattice lat(testing::figure1_basis(), vec({"1", "1/5"}));
  const std::uint64_t f = 3, trials = 1000;
  const long double delta = 0.01L;
  EXPECT_EQ(amplification_runs(f, delta), 83u);
  // Each call succeeds with probability exactly 1/(2 f^2).
  auto oracle = adversarial_handle(exact_dgs_handle(OracleKind::dgs), 1.0L / 18);
  Rng rng(4);
  std::uint64_t failures = 0;
  for (std::uint64_t i = 0; i < trials; ++i) failures += !is_closest(lat, cvp_via_dgs_amplified(lat, f, oracle, delta, rng));
  EXPECT_LE(static_cast<long double>(failures) / trials, delta + 3 * se(delta, trials));
  EXPECT_EQ(oracle.log->calls, trials * 83);
  EXPECT_THROW(amplification_runs(3, 1), PreconditionViolated);
}

TEST(CvpViaDgs, RejectsCenteredOracle) {
  auto oracle = exact_dgs_handle(OracleKind::cdgs);
  Rng rng(5);
  EXPECT_THROW(cvp_via_dgs(ShiftedLattice(Basis::identity(2)), 3, oracle, rng), PreconditionViolated);
}

TEST(SvpGrid, CoversTheRelevantParameter) {
  const std::uint64_t f = 10;
  for (const auto& entry : testing::corpus()) {
    const SvpGrid g = svp_grid(entry.basis, f);
    const long double n = static_cast<long double>(entry.basis.dimension());
    const long double lambda1 = std::sqrt(to_long_double(solve_svp(entry.basis).lambda1_sq));
    const long double target = 10 * lambda1 / std::sqrt(std::log(10.0L));
    ASSERT_GE(g.s.size(), 2u) << entry.name;
    EXPECT_LE(to_long_double(g.s.front()), target);
    bool covered = false;
    for (std::size_t i = 1; i < g.s.size(); ++i) {
      const long double a = to_long_double(g.s[i - 1]), b = to_long_double(g.s[i]);
      EXPECT_NEAR(static_cast<double>(b / a), static_cast<double>(1 + 1 / (n * n)), 1e-12) << entry.name;
      covered = covered || (a <= target && target < b);
    }
    EXPECT_TRUE(covered) << entry.name;
    EXPECT_EQ(g.samples_per_point, static_cast<std::uint64_t>(std::ceil(100 * n * 100)));
    EXPECT_LE(g.d_min, lambda1);
    EXPECT_GE(g.d_max, lambda1);
  }
  EXPECT_THROW(svp_grid(Basis::identity(2), 9), PreconditionViolated);
}

TEST(SvpViaCdgs, Z2ExactOracle) {
  const Basis b = Basis::identity(2);
  const long double gamma = svp_approximation_factor(2, 10);
  EXPECT_NEAR(static_cast<double>(gamma), 10 * std::sqrt(2 / std::log(10.0)), 1e-12);
  auto oracle = exact_dgs_handle(OracleKind::cdgs);
  Rng rng(6);
  int unit = 0;
  for (int i = 0; i < 100; ++i) {
    const auto res = svp_via_cdgs(b, 10, oracle, rng);
    ASSERT_TRUE(res.vector.has_value());
    const Rational len = res.vector->norm_sq();
    EXPECT_LE(to_long_double(len), gamma * gamma);
    unit += len == 1;
  }
  EXPECT_GE(unit, 99);
  EXPECT_EQ(oracle.log->lattices, std::set<std::string>{lattice_key(ShiftedLattice(b))});
}

TEST(SvpViaCdgs, DiagonalExactOracle) {
  const Basis b = testing::figure1_basis();
  const long double gamma = svp_approximation_factor(2, 10);
  auto oracle = exact_dgs_handle(OracleKind::cdgs);
  Rng rng(7);
  int typical = 0;
  for (int i = 0; i < 50; ++i) {
    const auto res = svp_via_cdgs(b, 10, oracle, rng);
    ASSERT_TRUE(res.vector.has_value());
    EXPECT_LE(std::sqrt(to_long_double(res.vector->norm_sq())), gamma / 2);
    typical += *res.vector == vec({"0", "1/2"}) || *res.vector == vec({"0", "-1/2"});
  }
  EXPECT_GE(typical, 49);
}

TEST(SvpViaCdgs, AdversarialOracleNeverYieldsZeroOrNonMembers) {
  const Basis b = testing::figure1_basis();
  const long double gamma = svp_approximation_factor(2, 10);
  auto oracle = adversarial_handle(exact_dgs_handle(OracleKind::cdgs), 0.1L, 4 * gamma);
  Rng rng(8);
  const auto res = svp_via_cdgs(b, 10, oracle, rng);
  ASSERT_TRUE(res.vector.has_value());
  EXPECT_FALSE(res.vector->is_zero());
  EXPECT_TRUE(is_lattice_member(b, *res.vector));
  EXPECT_LE(std::sqrt(to_long_double(res.vector->norm_sq())), gamma / 2);
  EXPECT_EQ(oracle.log->samples, res.samples);
}

TEST(SvpViaCdgs, ReportsAllZeroSamples) {
  DgsOracleHandle zero;
  zero.kind = OracleKind::cdgs;
  zero.sample = [](const ShiftedLattice& lat, const Rational&, Rng&) { return RationalVector(lat.dimension()); };
  Rng rng(9);
  const auto res = svp_via_cdgs(Basis::identity(1), 10, zero, rng);
  EXPECT_FALSE(res.vector.has_value());
  EXPECT_GT(res.grid_points, 0u);
}

TEST(ExactHandle, ShortestOfBatchMatchesExplicitMinimum) {
  const Basis b = Basis::identity(2);
  const ShiftedLattice lat(b);
  const Rational s(1);
  const std::uint64_t k = 3, n = 30000;
  auto oracle = exact_dgs_handle(OracleKind::cdgs);
  Rng rng(10);
  std::map<std::string, std::uint64_t> fused, plain;
  for (std::uint64_t i = 0; i < n; ++i) {
    const auto x = oracle.shortest_of_batch(b, s, k, rng);
    ++fused[x ? x->key() : "none"];
    std::optional<RationalVector> best;
    for (std::uint64_t j = 0; j < k; ++j) {
      const RationalVector y = oracle.sample(lat, s, rng);
      if (y.is_zero()) continue;
      if (!best || y.norm_sq() < best->norm_sq() || (y.norm_sq() == best->norm_sq() && y < *best)) best = y;
    }
    ++plain[best ? best->key() : "none"];
  }
  const long double p0 = 1 / (1 + rho_z_nonzero(1)) / (1 + rho_z_nonzero(1));
  const long double none = std::pow(p0, 3.0L);
  EXPECT_NEAR(static_cast<double>(fused["none"]) / n, static_cast<double>(none), 4 * static_cast<double>(se(none, n)));
  std::set<std::string> keys;
  for (const auto& [key, c] : fused) keys.insert(key);
  for (const auto& [key, c] : plain) keys.insert(key);
  for (const auto& key : keys) {
    const long double a = static_cast<long double>(fused[key]) / n, c = static_cast<long double>(plain[key]) / n;
    const long double pooled = (a + c) / 2;
    EXPECT_NEAR(static_cast<double>(a), static_cast<double>(c), 4 * std::sqrt(2.0) * static_cast<double>(se(pooled, n)) + 1e-9)
        << key;
  }
  // Ties at norm 1 resolve to the lexicographically smallest: (-1, 0).
  EXPECT_GT(fused[ivec({-1, 0}).key()], fused[ivec({1, 0}).key()]);
}

TEST(LowerBound, AppendedShortVectorIsRarelySampled) {
  // L = L' + tZ with lambda_1(L') > t: the only vectors of L up to length t
  // are +-t e_5.
  const Rational t = frac(5, 2);
  std::vector<RationalVector> cols;
  const std::vector<std::vector<long>> lp = {{3, 1, 0, 0}, {0, 3, 1, 0}, {0, 0, 3, 1}, {1, 0, 0, 3}};
  for (const auto& c : lp) cols.push_back(ivec({c[0], c[1], c[2], c[3], 0}));
  cols.push_back(RationalVector({Rational(0), Rational(0), Rational(0), Rational(0), t}));
  const Basis b(cols);
  std::vector<RationalVector> inner;
  for (const auto& c : lp) inner.push_back(ivec({c[0], c[1], c[2], c[3]}));
  ASSERT_GT(solve_svp(Basis(inner)).lambda1_sq, t * t);
  const long double envelope = std::exp(-to_long_double(t * t));
  const std::uint64_t n = 100000;
  for (const Rational& s : {frac(1, 2), Rational(1), frac(3, 2)}) {
    const auto d = exact_dgs(ShiftedLattice(b), s);
    Rng rng(11, to_string(s));
    std::uint64_t short_hits = 0;
    for (std::uint64_t i = 0; i < n; ++i) {
      const Rational len = d.sample(rng).norm_sq();
      short_hits += len > 0 && len <= t * t;
    }
    EXPECT_LE(static_cast<long double>(short_hits) / n, envelope + 3 * se(envelope, n)) << to_string(s);
  }
}

}  // namespace
}  // namespace dgslab
