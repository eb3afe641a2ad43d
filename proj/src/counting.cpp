#include "dgslab/counting.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dgslab/errors.hpp"
#include "dgslab/primes.hpp"
#include "dgslab/sparsifier.hpp"

namespace dgslab {

namespace {

void check_gap(const GapInstance& inst, long double f) {
  if (!(f > 0)) throw PreconditionViolated("f must be positive");
  if (inst.threshold_n < 1) throw PreconditionViolated("threshold N must be at least 1");
  const long double want = 1 + 1 / f;
  if (std::fabs(inst.gap_gamma - want) > 1e-12L * want) throw PreconditionViolated("gap_gamma must equal 1 + 1/f");
}

// Runs the sparsify-and-query loop shared by both deciders.
template <class Trial>
bool threshold_rule(std::uint64_t p, std::uint64_t l, std::uint64_t n, Trial&& trial, DecisionStats& st) {
  const long double ld = static_cast<long double>(l);
  st.prime = p;
  st.planned_trials = l;
  st.threshold = ld * static_cast<long double>(n) / static_cast<long double>(p) + 2 * std::sqrt(ld);
  const auto floor_t = static_cast<std::uint64_t>(std::floor(st.threshold));
  for (std::uint64_t i = 0; i < l; ++i) {
    if (st.hits > floor_t) return true;
    if (st.hits + (l - i) <= floor_t) return false;
    ++st.trials;
    if (trial()) ++st.hits;
  }
  return st.hits > floor_t;
}

long double ladder_gap(long double gamma, std::uint64_t n) {
  return std::max(std::pow(gamma, 1.0L / 20), 1 + 1.0L / static_cast<long double>(n + 1));
}

std::vector<std::uint64_t> ladder_rungs(long double gamma, std::uint64_t upto) {
  std::vector<std::uint64_t> rungs;
  for (std::uint64_t j = 0;; ++j) {
    const long double v = std::ceil(std::pow(gamma, static_cast<long double>(j) / 20));
    if (v > static_cast<long double>(upto)) break;
    const auto r = static_cast<std::uint64_t>(v);
    if (rungs.empty() || rungs.back() != r) rungs.push_back(r);
  }
  return rungs;
}

// Majority vote with early stopping.
template <class Run>
bool majority(std::uint64_t runs, Run&& run, std::uint64_t& spent) {
  std::uint64_t yes = 0, no = 0;
  while (2 * yes <= runs && 2 * no <= runs) {
    ++spent;
    (run() ? yes : no)++;
  }
  return 2 * yes > runs;
}

// Exponential then binary search for the last rung the test accepts.
template <class Test>
CountEstimate run_ladder(long double gamma, long double confidence, long double single_error, Test&& test) {
  constexpr std::uint64_t kMaxRung = std::uint64_t{1} << 40;
  const std::vector<std::uint64_t> rungs = ladder_rungs(gamma, kMaxRung);
  const long double delta = 1 - confidence;
  std::uint64_t k = 0;
  CountEstimate out;
  auto accepts = [&](std::size_t idx) {
    const long double target = delta / static_cast<long double>((k + 1) * (k + 2));
    ++k;
    return test(rungs[idx], majority_runs(single_error, target), out.decisions);
  };
  // lo: last index known to accept (-1 if none); hi: first index known to reject.
  long long lo = -1;
  std::size_t hi = 0, step = 1;
  while (true) {
    if (hi >= rungs.size()) throw IterationCapExceeded("count estimate beyond 2^40");
    if (!accepts(hi)) break;
    lo = static_cast<long long>(hi);
    hi += step;
    step *= 2;
  }
  while (static_cast<long long>(hi) - lo > 1) {
    const std::size_t mid = static_cast<std::size_t>(lo + (static_cast<long long>(hi) - lo) / 2);
    if (accepts(mid))
      lo = static_cast<long long>(mid);
    else
      hi = mid;
  }
  out.value = lo < 0 ? 1 : rungs[static_cast<std::size_t>(lo)] + 1;
  out.lower_factor = std::pow(gamma, -1.0L / 10);
  return out;
}

}  // namespace

std::uint64_t CountingParams::shifted_prime(long double f, std::uint64_t n) const {
  const long double a = static_cast<long double>(n) * f * (preset == Preset::faithful ? 200 : 8);
  return prime_between(a, 2 * a);
}

std::uint64_t CountingParams::primitive_prime(long double f, std::uint64_t n) const {
  const long double fn = f * static_cast<long double>(n);
  const long double a = std::max(101.0L, fn * std::log(10 * fn) * (preset == Preset::faithful ? 200 : 8));
  return prime_between(a, 2 * a);
}

std::uint64_t CountingParams::trials(long double f, std::uint64_t p, std::uint64_t n) const {
  const long double ratio = static_cast<long double>(p) / static_cast<long double>(n);
  const long double l = std::ceil((preset == Preset::faithful ? 100 : 16) * f * f * ratio * ratio);
  if (l > 1e15L) throw IterationCapExceeded("trial count out of range");
  return static_cast<std::uint64_t>(l);
}

std::uint64_t majority_runs(long double q, long double target) {
  if (!(q >= 0 && q < 0.5L)) throw PreconditionViolated("single-run error must be below 1/2");
  if (!(target > 0)) throw PreconditionViolated("target error must be positive");
  for (std::uint64_t r = 1; r < 100000; r += 2) {
    // P[Bin(r, q) >= (r + 1) / 2], summed in log space.
    long double tail = 0;
    for (std::uint64_t k = (r + 1) / 2; k <= r; ++k) {
      const long double lr = static_cast<long double>(r), lk = static_cast<long double>(k);
      tail += std::exp(std::lgamma(lr + 1) - std::lgamma(lk + 1) - std::lgamma(lr - lk + 1) + lk * std::log(q) +
                       (lr - lk) * std::log1p(-q));
    }
    if (q == 0 || tail <= target) return r;
  }
  throw IterationCapExceeded("majority size out of range");
}

bool gap_vcp_decide(const GapInstance& inst, SublatticeOracle& oracle, long double f, Rng& rng,
                    const CountingParams& params, DecisionStats* stats) {
  check_gap(inst, f);
  DecisionStats local;
  DecisionStats& st = stats ? *stats : local;
  st = DecisionStats{};
  const std::uint64_t p = params.shifted_prime(f, inst.threshold_n);
  const std::uint64_t l = params.trials(f, p, inst.threshold_n);
  const Int128 bound = oracle.scaled_key(inst.radius_key);
  SparsifiedPair pair(inst.lat.basis, p, std::vector<std::uint64_t>(inst.lat.dimension()), {});
  return threshold_rule(p, l, inst.threshold_n, [&] {
    pair.redraw(rng, true);
    return oracle.closest(pair, bound).has_value();
  }, st);
}

bool gap_pvcp_decide(const GapInstance& inst, SublatticeOracle& oracle, long double f, Rng& rng,
                     const CountingParams& params, DecisionStats* stats) {
  check_gap(inst, f);
  DecisionStats local;
  DecisionStats& st = stats ? *stats : local;
  st = DecisionStats{};
  const auto shortest = oracle.shortest(oracle.whole_lattice(), std::nullopt);
  if (!shortest) throw std::logic_error("SVP oracle returned nothing for the whole lattice");
  const Rational lambda_key = oracle.unscaled_key(shortest->key);
  const long double lambda = oracle.norm().radius_of_key(lambda_key);
  const long double r = oracle.norm().radius_of_key(inst.radius_key);
  if (lambda_key > inst.radius_key || lambda < inst.beta * r / static_cast<long double>(inst.threshold_n)) {
    st.guard = true;
    return false;
  }
  const std::uint64_t p = params.primitive_prime(f, inst.threshold_n);
  const std::uint64_t l = params.trials(f, p, inst.threshold_n);
  const Int128 bound = oracle.scaled_key(inst.radius_key);
  if (p < 101) throw std::logic_error("unshifted sparsification needs p >= 101");
  SparsifiedPair pair(inst.lat.basis, p, std::vector<std::uint64_t>(inst.lat.dimension()), {});
  return threshold_rule(p, l, inst.threshold_n, [&] {
    pair.redraw(rng, false);
    return oracle.shortest(pair, bound).has_value();
  }, st);
}

CountEstimate estimate_count(const ShiftedLattice& lat, const Rational& radius_key, long double f,
                             SublatticeOracle& oracle, Rng& rng, const CountingParams& params) {
  if (f < 2) throw PreconditionViolated("estimate_count needs f >= 2");
  const long double gamma = 1 + 1 / f;
  CountEstimate out = run_ladder(gamma, params.confidence, params.single_run_error,
                                 [&](std::uint64_t n, std::uint64_t runs, std::uint64_t& spent) {
                                   const long double g = ladder_gap(gamma, n);
                                   const GapInstance inst{lat, radius_key, n, g, 0};
                                   return majority(runs, [&] {
                                     return gap_vcp_decide(inst, oracle, 1 / (g - 1), rng, params);
                                   }, spent);
                                 });
  out.method = "ladder/" + params.name();
  return out;
}

CountEstimate estimate_primitive_count(const Basis& basis, const Rational& radius_key, long double f,
                                       SublatticeOracle& oracle, Rng& rng, const CountingParams& params) {
  if (f < 2) throw PreconditionViolated("estimate_primitive_count needs f >= 2");
  const long double gamma = 1 + 1 / f;
  const long double n = static_cast<long double>(basis.dimension());
  const long double beta = 1 / (100 * n * n * f);
  const ShiftedLattice lat(basis);

  const auto shortest = oracle.shortest(oracle.whole_lattice(), std::nullopt);
  if (!shortest) throw std::logic_error("SVP oracle returned nothing for the whole lattice");
  const Rational lambda_key = oracle.unscaled_key(shortest->key);
  CountEstimate out;
  out.method = "primitive-ladder/" + params.name();
  if (lambda_key > radius_key) {
    out.none_found = true;
    return out;
  }
  if (oracle.norm().radius_of_key(lambda_key) < beta * oracle.norm().radius_of_key(radius_key)) {
    out.degenerate_flag = true;
    return out;
  }
  const std::string method = out.method;
  out = run_ladder(gamma, params.confidence, params.single_run_error,
                   [&](std::uint64_t k, std::uint64_t runs, std::uint64_t& spent) {
                     const long double g = ladder_gap(gamma, k);
                     const GapInstance inst{lat, radius_key, k, g, beta};
                     return majority(runs, [&] {
                       return gap_pvcp_decide(inst, oracle, 1 / (g - 1), rng, params);
                     }, spent);
                   });
  out.method = method;
  return out;
}

ExactCounter::ExactCounter(const ShiftedLattice& lat, const NormBody& norm, const Rational& key_bound)
    : frame_(std::make_shared<const IntegerFrame>(lat)), norm_(norm) {
  if (!norm.exact()) throw std::invalid_argument("exact counter needs an exact norm");
  ensure(frame_->scaled_key(norm_.kind(), key_bound));
}

void ExactCounter::ensure(Int128 bound) {
  if (cloud_ && cloud_->key_bound() >= bound) return;
  if (cloud_) bound = std::max(bound, cloud_->key_bound() * 2);
  cloud_ = std::make_unique<PointCloud>(frame_, norm_, bound, false);
  primitive_keys_.clear();
  if (!frame_->lattice().shift.is_zero()) return;
  const std::size_t n = frame_->dimension();
  for (std::size_t i = 0; i < cloud_->size(); ++i) {
    const std::int64_t* v = cloud_->coords(i);
    std::int64_t g = 0;
    for (std::size_t j = 0; j < n; ++j) g = std::gcd(g, v[j]);
    if (g == 1) primitive_keys_.push_back(cloud_->key(i));
  }
}

std::uint64_t ExactCounter::count(const Rational& radius_key) {
  if (radius_key < 0) return 0;
  const Int128 k = frame_->scaled_key(norm_.kind(), radius_key);
  ensure(k);
  return cloud_->count_within(k);
}

std::uint64_t ExactCounter::primitive_count(const Rational& radius_key) {
  if (!frame_->lattice().shift.is_zero()) throw std::invalid_argument("primitive counts need an unshifted lattice");
  if (radius_key < 0) return 0;
  const Int128 k = frame_->scaled_key(norm_.kind(), radius_key);
  ensure(k);
  const auto end = std::upper_bound(primitive_keys_.begin(), primitive_keys_.end(), k);
  return static_cast<std::uint64_t>(end - primitive_keys_.begin()) / 2;
}

Rational ExactCounter::shortest_key() {
  if (!frame_->lattice().shift.is_zero()) throw std::invalid_argument("lambda_1 needs an unshifted lattice");
  while (cloud_->size() < 2) ensure(cloud_->key_bound() * 2 + 1);
  return frame_->unscaled_key(norm_.kind(), cloud_->key(1));
}

}  // namespace dgslab
