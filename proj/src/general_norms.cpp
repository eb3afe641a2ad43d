#include "dgslab/general_norms.hpp"

#include <cmath>
#include <optional>

#include "dgslab/errors.hpp"

namespace dgslab {

namespace {

RationalVector offset_of(const ShiftedLattice& lat, const std::vector<std::int64_t>& v);

NormBody norm_for(int q) {
  if (q == 1) return NormBody::l1();
  if (q == 2) return NormBody::l2();
  throw PreconditionViolated("chi_q is implemented for q in {1, 2}");
}

RationalVector offset_of(const ShiftedLattice& lat, const std::vector<std::int64_t>& v) {
  RationalVector c(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) c[i] = Rational(static_cast<long>(v[i]));
  return lat.basis.apply(c) - lat.shift;
}

}  // namespace

// Box search in coefficient space, independent of the Gram-Schmidt
// enumeration: with R = ||B v0 - t||_K for the rounded coefficients v0, every
// x with ||x - t||_K <= R has |(B^-1 (x - t))_i| <= R ||row_i(B^-1)||_1,
// since ||w||_inf <= ||w||_K for every l_q norm.
RationalVector cvp_k(const ShiftedLattice& lat, const NormBody& norm) {
  const std::size_t n = lat.dimension();
  if (n > dimension_cap()) throw DimensionCapExceeded("cvp_k above the dimension cap");
  const RationalMatrix& inv = lat.basis.inverse();
  const RationalVector c = inv * lat.shift;
  std::vector<std::int64_t> v0(n);
  for (std::size_t i = 0; i < n; ++i) v0[i] = static_cast<std::int64_t>(std::llround(to_long_double(c[i])));
  const long double radius = norm.value(offset_of(lat, v0)) * (1 + 1e-12L) + 1e-12L;
  std::vector<std::int64_t> lo(n), hi(n);
  for (std::size_t i = 0; i < n; ++i) {
    long double row = 0;
    for (std::size_t j = 0; j < n; ++j) row += std::fabs(to_long_double(inv(i, j)));
    const long double ci = to_long_double(c[i]);
    lo[i] = static_cast<std::int64_t>(std::floor(ci - radius * row)) - 1;
    hi[i] = static_cast<std::int64_t>(std::ceil(ci + radius * row)) + 1;
  }
  std::optional<RationalVector> best;
  std::vector<std::int64_t> v(lo);
  while (true) {
    RationalVector y = offset_of(lat, v);
    if (!best) {
      best = std::move(y);
    } else {
      const int cmp = norm.compare(y, *best);
      if (cmp < 0 || (cmp == 0 && y < *best)) best = std::move(y);
    }
    std::size_t i = 0;
    while (i < n && v[i] == hi[i]) v[i] = lo[i], ++i;
    if (i == n) break;
    ++v[i];
  }
  return *best + lat.shift;
}

bool gap_vcp_k(const GapInstance& inst, const NormBody& norm, long double f, Rng& rng, const CountingParams& params,
               const OracleFactory& factory, DecisionStats* stats) {
  auto oracle = factory(inst.lat, norm);
  return gap_vcp_decide(inst, *oracle, f, rng, params, stats);
}

RationalVector uniform_k_ball_sample(SublatticeOracle& oracle, const Rational& radius_key, std::uint64_t n_count,
                                     std::uint64_t f, Rng& rng) {
  const ShiftedLattice& lat = oracle.lattice();
  if (!oracle.closest(oracle.whole_lattice(), oracle.scaled_key(radius_key))) return -lat.shift;
  return offset_of(lat, uniform_ball_sample(oracle, radius_key, n_count, f, rng).coords);
}

RationalVector uniform_k_ball_sample(const ShiftedLattice& lat, const Rational& radius_key, std::uint64_t n_count,
                                     std::uint64_t f, const NormBody& norm, Rng& rng, const OracleFactory& factory) {
  auto oracle = factory(lat, norm);
  return uniform_k_ball_sample(*oracle, radius_key, n_count, f, rng);
}

namespace {

BallDecomposition build_decomposition(const ShiftedLattice& lat, int q, const ChiQConfig& config,
                                      SublatticeOracle& oracle, Rng& rng) {
  if (config.f < 1) throw PreconditionViolated("f must be at least 1");
  const NormBody norm = norm_for(q);
  const std::size_t n = lat.dimension();
  const long double fl = static_cast<long double>(config.f);
  const long double ell_real = 100 * std::pow(static_cast<long double>(n), q) * std::pow(fl, q + 1);
  if (ell_real > static_cast<long double>(config.max_ell))
    throw DimensionCapExceeded("chi_q schedule longer than the configured cap");
  const auto ell = static_cast<std::uint64_t>(ell_real);
  const auto closest = oracle.closest(oracle.whole_lattice(), std::nullopt);
  if (!closest) throw std::logic_error("CVP oracle returned nothing");
  const Rational base = oracle.unscaled_key(closest->key);  // d^q for q in {1, 2}

  BallDecomposition out;
  const long double step = 1 / (10 * fl);
  std::vector<long double> raw;
  for (std::uint64_t i = 0; i <= ell; ++i) {
    out.radius_keys.push_back(base + frac(static_cast<long>(i), static_cast<long>(10 * config.f)));
    out.radii.push_back(norm.radius_of_key(out.radius_keys.back()));
    out.centers.emplace_back(n);
    const long double head = std::exp(-static_cast<long double>(i) * step);
    raw.push_back(i < ell ? head * -std::expm1(-step) : head);
  }
  if (config.counts == CountMode::exact) {
    ExactCounter counter(lat, norm, out.radius_keys.back());
    for (const auto& r : out.radius_keys) {
      CountEstimate e;
      e.value = std::max<std::uint64_t>(1, counter.count(r));
      e.method = "exact";
      out.counts.push_back(e);
    }
  } else {
    for (const auto& r : out.radius_keys) out.counts.push_back(estimate_count(lat, r, fl, oracle, rng, config.counting));
  }
  std::vector<long double> terms(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) terms[i] = raw[i] * static_cast<long double>(out.counts[i].value);
  const long double total = compensated_sum(terms);
  for (auto& t : terms) t /= total;
  out.weights = std::move(terms);
  return out;
}

}  // namespace

BallDecomposition chi_q_decomposition(const ShiftedLattice& lat, int q, const ChiQConfig& config, Rng& rng) {
  auto oracle = config.factory(lat, norm_for(q));
  return build_decomposition(lat, q, config, *oracle, rng);
}

ChiQSampler::ChiQSampler(const ShiftedLattice& lat, int q, const ChiQConfig& config, Rng& rng)
    : lat_(lat), config_(config) {
  oracle_ = config.factory(lat, norm_for(q));
  decomposition_ = build_decomposition(lat, q, config, *oracle_, rng);
  long double run = 0;
  for (long double w : decomposition_.weights) cumulative_.push_back(run += w);
}

RationalVector ChiQSampler::sample(Rng& rng) {
  const std::size_t k = rng.pick_cumulative(cumulative_);
  return uniform_k_ball_sample(*oracle_, decomposition_.radius_keys[k], decomposition_.counts[k].value, config_.f,
                               rng);
}

RationalVector lsp_chi_q_sample(const ShiftedLattice& lat, int q, const ChiQConfig& config, Rng& rng) {
  ChiQSampler sampler(lat, q, config, rng);
  return sampler.sample(rng);
}

ExactDistribution exact_chi_q(const ShiftedLattice& lat, int q, long double tail_eps) {
  if (!(tail_eps > 0 && tail_eps < 1)) throw std::invalid_argument("tail_eps must lie in (0, 1)");
  const NormBody norm = norm_for(q);
  const Rational base = norm.key(solve_cvp(lat, norm) - lat.shift);
  const long double d = norm.radius_of_key(base);
  const long double log_eps = std::log(1 / tail_eps);
  const long double slack =
      log_eps + static_cast<long double>(lat.dimension()) * std::log(10 + d + log_eps) + 5;
  const Rational bound = base + rational_from_long_double(slack) + 1;
  const BallEnumeration ball = enumerate_ball(lat, bound, norm);
  std::vector<RationalVector> support;
  std::vector<long double> weights;
  for (const auto& p : ball.points) {
    support.push_back(p.offset);
    weights.push_back(std::exp(-to_long_double(p.key - base)));
  }
  return ExactDistribution(std::move(support), std::move(weights), norm, bound, tail_eps);
}

}  // namespace dgslab
