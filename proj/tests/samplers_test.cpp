#include "dgslab/samplers.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "dgslab/errors.hpp"
#include "dgslab/exact_oracles.hpp"
#include "dgslab/gaussian.hpp"
#include "dgslab/verify.hpp"
#include "test_support.hpp"

namespace dgslab {
namespace {

using testing::ivec;
using testing::vec;

RationalVector offset(const ShiftedLattice& lat, const std::vector<std::int64_t>& v) {
  RationalVector c(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) c[i] = Rational(static_cast<long>(v[i]));
  return lat.basis.apply(c) - lat.shift;
}

// Sign-normalized key of a +- pair.
std::string pair_key(std::vector<std::int64_t> v) {
  const auto first = std::find_if(v.begin(), v.end(), [](std::int64_t x) { return x != 0; });
  if (first != v.end() && *first < 0)
    for (auto& x : v) x = -x;
  std::string s;
  for (auto x : v) s += std::to_string(x) + ",";
  return s;
}

long double se(long double p, std::uint64_t n) { return std::sqrt(p * (1 - p) / static_cast<long double>(n)); }

SamplerConfig exact_config(std::uint64_t f = 10) {
  SamplerConfig c;
  c.f = f;
  c.counts = CountMode::exact;
  return c;
}

TEST(UniformBallSample, NearlyUniformOnZ2UnitBall) {
  const ShiftedLattice lat(Basis::identity(2));
  auto oracle = make_scan_oracle(lat, NormBody::l2());
  Rng rng(1);
  const std::uint64_t n = 50000;
  std::map<std::string, std::uint64_t> hits;
  for (std::uint64_t i = 0; i < n; ++i) ++hits[offset(lat, uniform_ball_sample(*oracle, Rational(1), 5, 10, rng).coords).key()];
  ASSERT_EQ(hits.size(), 5u);
  const long double gamma = 1.1L;
  for (const auto& [key, c] : hits) {
    const long double freq = static_cast<long double>(c) / n;
    EXPECT_GE(freq, 1 / (5 * gamma) - 3 * se(0.2L, n)) << key;
    EXPECT_LE(freq, gamma / 5 + 3 * se(0.2L, n)) << key;
  }
}

TEST(UniformBallSample, SingletonBallAlwaysReturnsTheCenter) {
  const ShiftedLattice lat(Basis::identity(2));
  auto oracle = make_scan_oracle(lat, NormBody::l2());
  Rng rng(2);
  for (int i = 0; i < 200; ++i) {
    const auto y = uniform_ball_sample(*oracle, frac(1, 4), 1, 10, rng);
    EXPECT_EQ(offset(lat, y.coords), ivec({0, 0}));
    EXPECT_EQ(y.key, 0);
  }
}

TEST(UniformBallSample, DeepHoleSplitsEvenlyOverFourNearestPoints) {
  const ShiftedLattice lat = testing::figure1_deep_hole();
  auto oracle = make_scan_oracle(lat, NormBody::l2());
  Rng rng(3);
  const std::uint64_t n = 20000;
  std::map<std::string, std::uint64_t> hits;
  for (std::uint64_t i = 0; i < n; ++i)
    ++hits[offset(lat, uniform_ball_sample(*oracle, frac(37, 16), 4, 10, rng).coords).key()];
  const std::set<std::string> expected = {vec({"3/2", "1/4"}).key(), vec({"3/2", "-1/4"}).key(),
                                          vec({"-3/2", "1/4"}).key(), vec({"-3/2", "-1/4"}).key()};
  std::set<std::string> got;
  for (const auto& [k, c] : hits) {
    got.insert(k);
    const long double freq = static_cast<long double>(c) / n;
    EXPECT_NEAR(static_cast<double>(freq), 0.25, static_cast<double>(0.25L * 0.1L + 3 * se(0.25L, n))) << k;
  }
  EXPECT_EQ(got, expected);
}

TEST(UniformBallSample, OutputsStayInTheBall) {
  const ShiftedLattice lat(testing::random3_basis(), vec({"1/2", "1/3", "0"}));
  const Rational r2(9);
  const std::uint64_t count = exact_count(lat, r2);
  auto oracle = make_scan_oracle(lat, NormBody::l2());
  Rng rng(4);
  std::set<std::string> seen;
  for (int i = 0; i < 3000; ++i) {
    const auto y = uniform_ball_sample(*oracle, r2, count, 10, rng);
    const RationalVector x = offset(lat, y.coords);
    ASSERT_LE(x.norm_sq(), r2);
    EXPECT_EQ(oracle->unscaled_key(y.key), x.norm_sq());
    seen.insert(x.key());
  }
  EXPECT_EQ(seen.size(), count);
}

TEST(UniformBallSample, GivesUpAfterTheIterationCap) {
  // Claiming one point for a ball with 5 makes each round succeed with
  // probability about 5/p; a cap of 1 * f^2 = 4 rounds runs out quickly.
  const ShiftedLattice lat(Basis::identity(2));
  auto oracle = make_scan_oracle(lat, NormBody::l2());
  Rng rng(5);
  EXPECT_THROW(
      {
        for (int i = 0; i < 200; ++i) uniform_ball_sample(*oracle, Rational(1), 1, 2, rng, nullptr, 1);
      },
      IterationCapExceeded);
  EXPECT_THROW(uniform_ball_sample(*oracle, Rational(1), 0, 2, rng), PreconditionViolated);
}

TEST(UniformPrimitiveSample, UnitBallOfZ2) {
  const ShiftedLattice lat(Basis::identity(2));
  auto oracle = make_scan_oracle(lat, NormBody::l2());
  Rng rng(6);
  const std::uint64_t n = 4000;
  std::map<std::string, std::uint64_t> hits;
  for (std::uint64_t i = 0; i < n; ++i) ++hits[pair_key(uniform_primitive_sample(*oracle, Rational(1), 2, 10, rng).coords)];
  ASSERT_EQ(hits.size(), 2u);
  for (const auto& [k, c] : hits)
    EXPECT_NEAR(static_cast<double>(c) / n, 0.5, 0.5 * 0.1 + 3 * static_cast<double>(se(0.5L, n))) << k;
}

TEST(UniformPrimitiveSample, FourPairsAtRadiusSqrt2) {
  const ShiftedLattice lat(Basis::identity(2));
  auto oracle = make_scan_oracle(lat, NormBody::l2());
  Rng rng(7);
  const std::uint64_t n = 3000;
  std::map<std::string, std::uint64_t> hits;
  for (std::uint64_t i = 0; i < n; ++i) {
    const auto y = uniform_primitive_sample(*oracle, Rational(2), 4, 10, rng);
    ASSERT_EQ(std::gcd(y.coords[0], y.coords[1]), 1);
    ++hits[pair_key(y.coords)];
  }
  ASSERT_EQ(hits.size(), 4u);
  const long double gamma = 1.1L;
  for (const auto& [k, c] : hits) {
    const long double freq = static_cast<long double>(c) / n;
    EXPECT_GE(freq, 1 / (4 * gamma) - 3 * se(0.25L, n)) << k;
    EXPECT_LE(freq, gamma / 4 + 3 * se(0.25L, n)) << k;
  }
}

TEST(UniformPrimitiveSample, OutputsArePrimitiveOnASkewLattice) {
  const Basis b = testing::random3_basis();
  const ShiftedLattice lat(b);
  const Rational r2(12);
  const std::uint64_t count = exact_primitive_count(b, r2);
  ASSERT_GE(count, 2u);
  auto oracle = make_scan_oracle(lat, NormBody::l2());
  Rng rng(8);
  for (int i = 0; i < 300; ++i) {
    const auto y = uniform_primitive_sample(*oracle, r2, count, 2, rng);
    const auto g = std::gcd(std::gcd(y.coords[0], y.coords[1]), y.coords[2]);
    EXPECT_EQ(g, 1);
    EXPECT_LE(offset(lat, y.coords).norm_sq(), r2);
  }
}

TEST(DgsSampler, ScheduleInvariants) {
  Rng rng(9);
  DgsSampler sampler(testing::figure1_deep_hole(), Rational(1), exact_config(), scan_oracle_factory(), rng);
  const RadialSchedule& sch = sampler.schedule();
  EXPECT_EQ(sch.base_sq, frac(37, 16));
  EXPECT_EQ(sch.ell, static_cast<std::uint64_t>(std::ceil(100 * 4 * 10 * std::log(10 + std::sqrt(37.0L / 16)))));
  ASSERT_EQ(sch.radii_sq.size(), sch.ell + 1);
  std::vector<long double> terms;
  for (std::size_t i = 0; i < sch.radii_sq.size(); ++i) {
    EXPECT_EQ(sch.radii_sq[i], frac(37, 16) + frac(static_cast<long>(i), 100));
    if (i > 0) {
      EXPECT_LT(sch.radii_sq[i - 1], sch.radii_sq[i]);
      EXPECT_GE(sch.counts[i].value, sch.counts[i - 1].value);
    }
    EXPECT_GE(sch.weights[i], 0);
    terms.push_back(sch.weights[i] * static_cast<long double>(sch.counts[i].value));
  }
  EXPECT_NEAR(static_cast<double>(sch.total), static_cast<double>(compensated_sum(terms)), 1e-12);
  EXPECT_EQ(sch.counts[0].value, 4u);
  EXPECT_EQ(sch.epsilon, std::exp2(-10.0L));
  // Weights telescope: sum_i w_i = 1 (relative to e^{-pi d^2}).
  EXPECT_NEAR(static_cast<double>(compensated_sum(sch.weights)), 1.0, 1e-12);
}

TEST(DgsSampler, MatchesExactDgsOnZ2) {
  const ShiftedLattice lat(Basis::identity(2));
  Rng rng(10);
  DgsSampler sampler(lat, Rational(1), exact_config(), scan_oracle_factory(), rng);
  const auto hist = collect([&](Rng& r) { return sampler.sample(r); }, 100000, rng);
  const auto rep = closeness_check(hist, exact_dgs(lat, Rational(1)), 1.1L, std::exp2(-10.0L));
  EXPECT_TRUE(rep.out_of_support.empty());
  EXPECT_LE(rep.statistical_distance, 0.10L);
  EXPECT_TRUE(rep.ratios_ok) << report_csv(rep);
}

TEST(DgsSampler, DeepHoleModesAtLargeWidth) {
  const ShiftedLattice lat = testing::figure1_deep_hole();
  Rng rng(11);
  DgsSampler sampler(lat, Rational(5), exact_config(), scan_oracle_factory(), rng);
  const auto hist = collect([&](Rng& r) { return sampler.sample(r); }, 5000, rng);
  std::vector<std::pair<std::uint64_t, std::string>> by_count;
  for (const auto& [k, c] : hist.counts) by_count.emplace_back(c, k);
  std::sort(by_count.rbegin(), by_count.rend());
  ASSERT_GE(by_count.size(), 4u);
  std::set<std::string> top;
  for (int i = 0; i < 4; ++i) top.insert(by_count[i].second);
  const std::set<std::string> expected = {vec({"3/2", "1/4"}).key(), vec({"3/2", "-1/4"}).key(),
                                          vec({"-3/2", "1/4"}).key(), vec({"-3/2", "-1/4"}).key()};
  EXPECT_EQ(top, expected);
  const auto rep = closeness_check(hist, exact_dgs(lat, Rational(5)), 1.1L, std::exp2(-10.0L));
  EXPECT_TRUE(rep.out_of_support.empty());
  EXPECT_LE(rep.statistical_distance, 0.10L);
}

TEST(DgsSampler, NarrowWidthOnLatticePointReturnsIt) {
  const ShiftedLattice lat(testing::random3_basis(), ivec({2, 1, 0}));
  Rng rng(12);
  const Rational s = frac(1, 10);  // well below lambda_1
  DgsSampler sampler(lat, s, exact_config(), scan_oracle_factory(), rng);
  std::uint64_t zeros = 0;
  for (int i = 0; i < 1000; ++i) zeros += sampler.sample(rng) == ivec({0, 0, 0});
  EXPECT_GE(zeros, 990u);
}

TEST(DgsSampler, EstimatedCountsWithShortSchedule) {
  const ShiftedLattice lat(Basis::identity(2), vec({"1/2", "1/2"}));
  SamplerConfig config;
  config.f = 2;
  config.counting = CountingParams::desk();
  config.ell_override = 8;
  Rng rng(13);
  auto audit = std::make_shared<OracleAudit>();
  DgsSampler sampler(lat, Rational(1), config, audited_factory(scan_oracle_factory(), audit), rng);
  const RadialSchedule& sch = sampler.schedule();
  ASSERT_EQ(sch.counts.size(), 9u);
  for (const auto& c : sch.counts) {
    EXPECT_EQ(c.method, "ladder/desk");
    EXPECT_GE(c.value, 3u);  // true count 4, lower factor gamma^{-1/10}
    EXPECT_LE(c.value, 4u);
  }
  EXPECT_GT(sch.epsilon, 0);
  EXPECT_LE(sch.epsilon, 1);
  std::map<std::string, std::uint64_t> hits;
  const std::uint64_t n = 2000;
  for (std::uint64_t i = 0; i < n; ++i) ++hits[sampler.sample(rng).key()];
  ASSERT_EQ(hits.size(), 4u);
  for (const auto& [k, c] : hits) EXPECT_NEAR(static_cast<double>(c) / n, 0.25, 0.06) << k;
  EXPECT_EQ(audit->violations, 0u);
  EXPECT_GT(audit->calls, 0u);
}

TEST(DgsSampler, SameSeedSameSamples) {
  const ShiftedLattice lat = testing::figure1_deep_hole();
  std::vector<std::string> runs[2];
  for (auto& out : runs) {
    Rng rng(14);
    DgsSampler sampler(lat, Rational(2), exact_config(), scan_oracle_factory(), rng);
    for (int i = 0; i < 200; ++i) out.push_back(sampler.sample(rng).key());
  }
  EXPECT_EQ(runs[0], runs[1]);
}

TEST(CdgsSampler, ZeroMassOnIntegers) {
  const Basis b = Basis::identity(1);
  Rng rng(15);
  CdgsSampler sampler(b, Rational(1), exact_config(), scan_oracle_factory(), rng);
  const std::uint64_t n = 100000;
  std::uint64_t zeros = 0;
  for (std::uint64_t i = 0; i < n; ++i) zeros += sampler.sample_coords(rng)[0] == 0;
  const long double ideal = 1 / (1 + rho_z_nonzero(1));
  EXPECT_NEAR(static_cast<double>(ideal), 0.9204418, 1e-7);
  EXPECT_NEAR(static_cast<double>(zeros) / n, static_cast<double>(ideal), 3 * static_cast<double>(se(ideal, n)));
}

TEST(CdgsSampler, MatchesExactDgsOnZ2) {
  const Basis b = Basis::identity(2);
  Rng rng(16);
  CdgsSampler sampler(b, Rational(1), exact_config(), scan_oracle_factory(), rng);
  const auto hist = collect([&](Rng& r) { return sampler.sample(r); }, 50000, rng);
  const auto rep = closeness_check(hist, exact_dgs(ShiftedLattice(b), Rational(1)), 1.1L, std::exp2(-10.0L));
  EXPECT_TRUE(rep.out_of_support.empty());
  EXPECT_LE(rep.statistical_distance, 0.10L);
  EXPECT_TRUE(rep.ratios_ok) << report_csv(rep);
}

TEST(CdgsSampler, WideIntegerTail) {
  const Basis b = Basis::identity(1);
  Rng rng(17);
  CdgsSampler sampler(b, Rational(3), exact_config(), scan_oracle_factory(), rng);
  EXPECT_TRUE(std::all_of(sampler.schedule().counts.begin(), sampler.schedule().counts.end(),
                          [](const CountEstimate& c) { return c.value == 1; }));
  const auto ideal = exact_dgs(ShiftedLattice(b), Rational(3));
  long double tail = 0;
  for (std::size_t i = 0; i < ideal.size(); ++i)
    if (abs(ideal.support()[i][0]) >= 2) tail += ideal.probabilities()[i];
  const std::uint64_t n = 50000;
  std::uint64_t far = 0;
  SampleStats stats;
  for (std::uint64_t i = 0; i < n; ++i) {
    far += std::llabs(sampler.sample_coords(rng, &stats)[0]) >= 2;
    EXPECT_TRUE(stats.zero_branch || stats.svp_branch);
  }
  EXPECT_NEAR(static_cast<double>(far) / n, static_cast<double>(tail), 0.1 * static_cast<double>(tail) + 3 * static_cast<double>(se(tail, n)));
}

TEST(CdgsSampler, SamplesAreLatticeMembers) {
  for (const auto& entry : testing::corpus()) {
    if (entry.basis.dimension() > 2) continue;
    Rng rng(18);
    CdgsSampler sampler(entry.basis, Rational(1), exact_config(), scan_oracle_factory(), rng);
    for (int i = 0; i < 300; ++i) ASSERT_TRUE(is_lattice_member(entry.basis, sampler.sample(rng))) << entry.name;
  }
}

TEST(CdgsSampler, EstimatedPrimitiveCountsWithShortSchedule) {
  const Basis b = Basis::identity(2);
  SamplerConfig config;
  config.f = 2;
  config.counting = CountingParams::desk();
  config.ell_override = 1;
  Rng rng(19);
  CdgsSampler sampler(b, Rational(1), config, scan_oracle_factory(), rng);
  const RadialSchedule& sch = sampler.schedule();
  ASSERT_EQ(sch.counts.size(), 2u);
  EXPECT_EQ(sch.radii_sq[1], 1 + frac(1, 400));
  for (const auto& c : sch.counts) EXPECT_LE(c.value, 2u);
  for (int i = 0; i < 500; ++i) {
    const auto v = sampler.sample_coords(rng);
    EXPECT_TRUE(v[0] == 0 || v[1] == 0);
  }
}

TEST(Samplers, RejectBadConfig) {
  Rng rng(20);
  SamplerConfig c = exact_config();
  c.f = 0;
  EXPECT_THROW(DgsSampler(ShiftedLattice(Basis::identity(2)), Rational(1), c, scan_oracle_factory(), rng),
               PreconditionViolated);
  EXPECT_THROW(CdgsSampler(Basis::identity(2), Rational(1), c, scan_oracle_factory(), rng), PreconditionViolated);
}

}  // namespace
}  // namespace dgslab
