#include "dgslab/samplers.hpp"

#include <cmath>
#include <numbers>

#include "dgslab/errors.hpp"
#include "dgslab/exact_oracles.hpp"
#include "dgslab/gaussian.hpp"
#include "dgslab/primes.hpp"
#include "dgslab/sparsifier.hpp"

namespace dgslab {

namespace {

constexpr long double kPi = std::numbers::pi_v<long double>;

std::uint64_t round_cap(std::uint64_t factor, std::uint64_t f) { return factor * f * f; }

template <class Query>
CosetPoint sparsify_until_found(SublatticeOracle& oracle, std::uint64_t p, bool shifted, std::uint64_t cap, Rng& rng,
                                std::uint64_t* rounds, Query&& query) {
  SparsifiedPair pair(oracle.lattice().basis, p, std::vector<std::uint64_t>(oracle.lattice().dimension()), {});
  for (std::uint64_t i = 1; i <= cap; ++i) {
    pair.redraw(rng, shifted);
    if (auto y = query(pair)) {
      if (rounds) *rounds = i;
      return *y;
    }
  }
  throw IterationCapExceeded("uniform sampler ran past its iteration cap; the count hypothesis likely fails");
}

// Tail mass bound outside the last radius, used when l is overridden.
long double tail_epsilon(long double center_dist, long double r_last_sq, long double base_sq, std::size_t n) {
  const long double r = std::sqrt(std::max(0.0L, r_last_sq - base_sq) / static_cast<long double>(n));
  if (r < 1 / std::sqrt(2 * kPi)) return 1;
  return std::min(1.0L, gaussian_tail_bound_general(center_dist, 1, n, r));
}

std::vector<long double> cumulative_of(RadialSchedule& sch) {
  std::vector<long double> terms(sch.weights.size());
  for (std::size_t i = 0; i < terms.size(); ++i)
    terms[i] = sch.weights[i] * static_cast<long double>(sch.counts[i].value);
  sch.total = compensated_sum(terms);
  std::vector<long double> cum(terms.size());
  long double run = 0;
  for (std::size_t i = 0; i < terms.size(); ++i) cum[i] = run += terms[i];
  return cum;
}

std::vector<std::int64_t> scaled_coords(const std::vector<std::int64_t>& v, std::int64_t z) {
  std::vector<std::int64_t> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    if (__builtin_mul_overflow(v[i], z, &out[i])) throw ArithmeticRangeError("sample coordinates overflow");
  return out;
}

RationalVector to_rational(const std::vector<std::int64_t>& v) {
  RationalVector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = Rational(static_cast<long>(v[i]));
  return out;
}

}  // namespace

CosetPoint uniform_ball_sample(SublatticeOracle& oracle, const Rational& radius_key, std::uint64_t n_count,
                               std::uint64_t f, Rng& rng, std::uint64_t* rounds, std::uint64_t iteration_cap_factor) {
  if (n_count < 1 || f < 1) throw PreconditionViolated("uniform_ball_sample needs N >= 1 and f >= 1");
  const long double fn = static_cast<long double>(f) * static_cast<long double>(n_count);
  const std::uint64_t p = prime_between(10 * fn, 20 * fn);
  const Int128 bound = oracle.scaled_key(radius_key);
  return sparsify_until_found(oracle, p, true, round_cap(iteration_cap_factor, f), rng, rounds,
                              [&](const SparsifiedPair& pair) { return oracle.closest(pair, bound); });
}

CosetPoint uniform_primitive_sample(SublatticeOracle& oracle, const Rational& radius_key, std::uint64_t n_count,
                                    std::uint64_t f, Rng& rng, std::uint64_t* rounds,
                                    std::uint64_t iteration_cap_factor) {
  if (n_count < 1 || f < 1) throw PreconditionViolated("uniform_primitive_sample needs N >= 1 and f >= 1");
  const long double fn = static_cast<long double>(f) * static_cast<long double>(n_count);
  const long double lo = 100 * fn * std::log(10 * fn);
  const std::uint64_t p = prime_between(lo, 2 * lo);
  const Int128 bound = oracle.scaled_key(radius_key);
  return sparsify_until_found(oracle, p, false, round_cap(iteration_cap_factor, f), rng, rounds,
                              [&](const SparsifiedPair& pair) { return oracle.shortest(pair, bound); });
}

DgsSampler::DgsSampler(const ShiftedLattice& lat, const Rational& s, const SamplerConfig& config,
                       const OracleFactory& factory, Rng& rng)
    : lat_(lat), scaled_(lat.scaled_down(s)), config_(config) {
  if (config.f < 1) throw PreconditionViolated("f must be at least 1");
  oracle_ = factory(scaled_, NormBody::l2());
  const auto closest = oracle_->closest(oracle_->whole_lattice(), std::nullopt);
  if (!closest) throw std::logic_error("CVP oracle returned nothing");
  const std::size_t n = lat.dimension();
  const long double dn = static_cast<long double>(n), fl = static_cast<long double>(config.f);
  RadialSchedule& sch = schedule_;
  sch.base_sq = oracle_->unscaled_key(closest->key);
  const long double d = std::sqrt(to_long_double(sch.base_sq));
  sch.ell = config.ell_override ? *config.ell_override
                                : static_cast<std::uint64_t>(std::ceil(100 * dn * dn * fl * std::log(10 + d)));
  const long double step = 1 / (10 * fl);
  for (std::uint64_t i = 0; i <= sch.ell; ++i) {
    sch.radii_sq.push_back(sch.base_sq + frac(static_cast<long>(i), static_cast<long>(10 * config.f)));
    sch.radii.push_back(std::sqrt(to_long_double(sch.radii_sq.back())));
    // e^{-pi r_i^2} - e^{-pi r_{i+1}^2}, divided by e^{-pi d^2}.
    const long double head = std::exp(-kPi * static_cast<long double>(i) * step);
    sch.weights.push_back(i < sch.ell ? head * -std::expm1(-kPi * step) : head);
  }
  sch.epsilon = config.ell_override
                    ? tail_epsilon(d, to_long_double(sch.radii_sq.back()), to_long_double(sch.base_sq), n)
                    : std::exp2(-fl);
  if (config.counts == CountMode::exact) {
    ExactCounter counter(scaled_, NormBody::l2(), sch.radii_sq.back());
    for (const auto& r : sch.radii_sq) {
      CountEstimate e;
      e.value = std::max<std::uint64_t>(1, counter.count(r));
      e.method = "exact";
      sch.counts.push_back(e);
    }
  } else {
    for (const auto& r : sch.radii_sq)
      sch.counts.push_back(estimate_count(scaled_, r, fl, *oracle_, rng, config.counting));
  }
  cumulative_ = cumulative_of(sch);
}

std::vector<std::int64_t> DgsSampler::sample_coords(Rng& rng, SampleStats* stats) {
  const std::size_t k = rng.pick_cumulative(cumulative_);
  std::uint64_t rounds = 0;
  const CosetPoint y = uniform_ball_sample(*oracle_, schedule_.radii_sq[k], schedule_.counts[k].value, config_.f, rng,
                                           &rounds, config_.iteration_cap_factor);
  if (stats) {
    *stats = SampleStats{};
    stats->index = k;
    stats->uniform_rounds = rounds;
  }
  return y.coords;
}

RationalVector DgsSampler::offset_of(const std::vector<std::int64_t>& v) const {
  return lat_.basis.apply(to_rational(v)) - lat_.shift;
}

RationalVector DgsSampler::sample(Rng& rng, SampleStats* stats) { return offset_of(sample_coords(rng, stats)); }

CdgsSampler::CdgsSampler(const Basis& basis, const Rational& s, const SamplerConfig& config,
                         const OracleFactory& factory, Rng& rng)
    : basis_(basis), scaled_(basis.scaled_down(s)), config_(config) {
  if (config.f < 1) throw PreconditionViolated("f must be at least 1");
  oracle_ = factory(scaled_, NormBody::l2());
  const auto shortest = oracle_->shortest(oracle_->whole_lattice(), std::nullopt);
  if (!shortest) throw std::logic_error("SVP oracle returned nothing");
  svp_coords_ = shortest->coords;
  const std::size_t n = basis.dimension();
  const long double dn = static_cast<long double>(n), fl = static_cast<long double>(config.f);
  RadialSchedule& sch = schedule_;
  sch.base_sq = oracle_->unscaled_key(shortest->key);
  svp_length_ = std::sqrt(to_long_double(sch.base_sq));
  sch.ell = config.ell_override ? *config.ell_override : static_cast<std::uint64_t>(std::ceil(200 * dn * dn * fl * fl));
  const long double step = 1 / (100 * dn * fl);
  const long double base = to_long_double(sch.base_sq);
  for (std::uint64_t i = 0; i <= sch.ell; ++i) {
    sch.radii_sq.push_back(sch.base_sq + frac(static_cast<long>(i), static_cast<long>(100 * n * config.f)));
    sch.radii.push_back(std::sqrt(to_long_double(sch.radii_sq.back())));
    const long double r_sq = base + static_cast<long double>(i) * step;
    sch.weights.push_back(i < sch.ell ? rho_z_nonzero_difference(r_sq, step) : rho_z_nonzero(1 / std::sqrt(r_sq)));
  }
  sch.epsilon = config.ell_override ? tail_epsilon(0, to_long_double(sch.radii_sq.back()), 0, n) : std::exp2(-fl);
  if (config.counts == CountMode::exact) {
    ExactCounter counter(scaled_, NormBody::l2(), sch.radii_sq.back());
    for (const auto& r : sch.radii_sq) {
      CountEstimate e;
      e.value = std::max<std::uint64_t>(1, counter.primitive_count(r));
      e.method = "exact";
      sch.counts.push_back(e);
    }
  } else {
    for (const auto& r : sch.radii_sq)
      sch.counts.push_back(estimate_primitive_count(scaled_.basis, r, fl, *oracle_, rng, config.counting));
  }
  cumulative_ = cumulative_of(sch);
}

std::vector<std::int64_t> CdgsSampler::sample_coords(Rng& rng, SampleStats* stats) {
  SampleStats local;
  SampleStats& st = stats ? *stats : local;
  st = SampleStats{};
  if (rng.bernoulli(1 / (1 + schedule_.total))) {
    st.zero_branch = true;
    return std::vector<std::int64_t>(basis_.dimension(), 0);
  }
  const std::size_t k = rng.pick_cumulative(cumulative_);
  st.index = k;
  const CountEstimate& nk = schedule_.counts[k];
  std::vector<std::int64_t> x;
  long double length = svp_length_;
  const bool estimated = config_.counts == CountMode::estimate;
  if (nk.value > 1 || (estimated && !nk.degenerate_flag && !nk.none_found)) {
    const CosetPoint y = uniform_primitive_sample(*oracle_, schedule_.radii_sq[k], nk.value, config_.f, rng,
                                                  &st.uniform_rounds, config_.iteration_cap_factor);
    x = y.coords;
    length = std::sqrt(to_long_double(oracle_->unscaled_key(y.key)));
  } else {
    st.svp_branch = true;
    x = svp_coords_;
  }
  const std::int64_t z = sample_z_nonzero(1 / length, rng, &st.z_rounds);
  return scaled_coords(x, z);
}

RationalVector CdgsSampler::point_of(const std::vector<std::int64_t>& v) const {
  return basis_.apply(to_rational(v));
}

RationalVector CdgsSampler::sample(Rng& rng, SampleStats* stats) { return point_of(sample_coords(rng, stats)); }

RationalVector dgs_sample(const ShiftedLattice& lat, const Rational& s, const SamplerConfig& config,
                          const OracleFactory& factory, Rng& rng) {
  DgsSampler sampler(lat, s, config, factory, rng);
  return sampler.sample(rng);
}

RationalVector cdgs_sample(const Basis& basis, const Rational& s, const SamplerConfig& config,
                           const OracleFactory& factory, Rng& rng) {
  CdgsSampler sampler(basis, s, config, factory, rng);
  return sampler.sample(rng);
}

}  // namespace dgslab
