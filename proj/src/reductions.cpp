#include "dgslab/reductions.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "dgslab/errors.hpp"
#include "dgslab/exact_oracles.hpp"

namespace dgslab {

namespace {

Rational rational_near(long double x) {
  const int bits = std::max(60, 60 - std::ilogb(x));
  return rational_from_long_double(x, bits);
}

// (norm, lex) order used for every "shortest" choice.
bool shorter(const RationalVector& a, const RationalVector& b) {
  const Rational na = a.norm_sq(), nb = b.norm_sq();
  if (na != nb) return na < nb;
  return a < b;
}

struct BatchTable {
  std::vector<RationalVector> nonzero;  // sorted by (norm, lex)
  std::vector<long double> cumulative;  // mass of nonzero[0..j]
};

struct ExactCache {
  std::map<std::string, ExactDistribution> dists;
  std::map<std::string, BatchTable> tables;

  const ExactDistribution& get(const ShiftedLattice& lat, const Rational& s, const std::string& key) {
    auto it = dists.find(key);
    if (it == dists.end()) it = dists.emplace(key, exact_dgs(lat, s)).first;
    return it->second;
  }

  const BatchTable& table(const ShiftedLattice& lat, const Rational& s, const std::string& key) {
    auto it = tables.find(key);
    if (it != tables.end()) return it->second;
    const ExactDistribution& d = get(lat, s, key);
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < d.size(); ++i)
      if (!d.support()[i].is_zero()) idx.push_back(i);
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t a, std::size_t b) { return shorter(d.support()[a], d.support()[b]); });
    BatchTable t;
    long double run = 0;
    for (std::size_t i : idx) {
      t.nonzero.push_back(d.support()[i]);
      t.cumulative.push_back(run += d.probabilities()[i]);
    }
    return tables.emplace(key, std::move(t)).first->second;
  }
};

void record(HandleLog& log, const std::string& lattice, std::uint64_t samples) {
  ++log.calls;
  log.samples += samples;
  log.lattices.insert(lattice);
}

}  // namespace

std::string lattice_key(const ShiftedLattice& lat) {
  std::string out;
  for (std::size_t i = 0; i < lat.dimension(); ++i) out += lat.basis.column(i).key() + ";";
  return out + "|" + lat.shift.key();
}

DgsOracleHandle exact_dgs_handle(OracleKind kind) {
  DgsOracleHandle h;
  h.kind = kind;
  h.name = kind == OracleKind::dgs ? "exact-dgs" : "exact-cdgs";
  auto cache = std::make_shared<ExactCache>();
  auto log = h.log;
  h.sample = [cache, log, kind](const ShiftedLattice& lat, const Rational& s, Rng& rng) {
    if (kind == OracleKind::cdgs && !lat.shift.is_zero())
      throw PreconditionViolated("centered oracle called with a shift");
    const std::string lk = lattice_key(lat);
    record(*log, lk, 1);
    return cache->get(lat, s, lk + "@" + to_string(s)).sample(rng);
  };
  if (kind == OracleKind::cdgs) {
    h.shortest_of_batch = [cache, log](const Basis& basis, const Rational& s, std::uint64_t k,
                                       Rng& rng) -> std::optional<RationalVector> {
      if (k == 0) return std::nullopt;
      const ShiftedLattice lat(basis);
      const std::string lk = lattice_key(lat);
      record(*log, lk, k);
      const BatchTable& t = cache->table(lat, s, lk + "@" + to_string(s));
      // Pr[min index > j] = (1 - C_j)^k, so the first j with
      // C_j >= 1 - u^{1/k} has the law of the minimum.
      const long double target = -std::expm1(std::log(rng.uniform_open01()) / static_cast<long double>(k));
      const auto it = std::lower_bound(t.cumulative.begin(), t.cumulative.end(), target);
      if (it == t.cumulative.end()) return std::nullopt;
      return t.nonzero[static_cast<std::size_t>(it - t.cumulative.begin())];
    };
  }
  return h;
}

DgsOracleHandle adversarial_handle(DgsOracleHandle inner, long double keep_probability, long double min_norm) {
  DgsOracleHandle h;
  h.kind = inner.kind;
  h.name = "adversarial(" + inner.name + ")";
  h.log = inner.log;
  auto in = std::make_shared<DgsOracleHandle>(std::move(inner));
  h.sample = [in, keep_probability, min_norm](const ShiftedLattice& lat, const Rational& s, Rng& rng) {
    const RationalVector y = in->sample(lat, s, rng);
    if (rng.bernoulli(keep_probability)) return y;
    const RationalVector b1 = lat.basis.column(0);
    const long double ny = std::sqrt(to_long_double(y.norm_sq())), nb = std::sqrt(to_long_double(b1.norm_sq()));
    const long double want = std::max(2 * ny + nb, min_norm);
    Rational m(1);
    RationalVector out = y + b1;
    while (std::sqrt(to_long_double(out.norm_sq())) < want) {
      m *= 2;
      out = y + b1 * m;
    }
    return out;
  };
  return h;
}

CvpParameters cvp_parameters(const ShiftedLattice& lat, std::uint64_t f) {
  if (f < 2) throw PreconditionViolated("cvp_via_dgs needs f >= 2");
  const std::size_t n = lat.dimension();
  mpz_class q = 1;
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& x : lat.basis.column(i)) accumulate_denominator_lcm(q, x);
    accumulate_denominator_lcm(q, lat.shift[i]);
  }
  CvpParameters p;
  p.q = Rational(q);
  p.d = bit_length_bounds(lat.basis).mu_hi;
  const long double denom = 100.0L * static_cast<long double>(f) * static_cast<long double>(n) *
                            to_long_double(p.q) * std::log(10 + to_long_double(p.d));
  p.s = Rational(1) / Rational(mpz_class(static_cast<unsigned long>(std::ceil(denom))));
  return p;
}

RationalVector cvp_via_dgs(const ShiftedLattice& lat, std::uint64_t f, const DgsOracleHandle& oracle, Rng& rng) {
  if (oracle.kind != OracleKind::dgs) throw PreconditionViolated("cvp_via_dgs needs a DGS oracle");
  return oracle.sample(lat, cvp_parameters(lat, f).s, rng) + lat.shift;
}

std::uint64_t amplification_runs(std::uint64_t f, long double delta) {
  if (!(delta > 0 && delta < 1)) throw PreconditionViolated("delta must lie in (0, 1)");
  const long double ff = static_cast<long double>(f);
  return static_cast<std::uint64_t>(std::ceil(2 * ff * ff * std::log(1 / delta)));
}

RationalVector cvp_via_dgs_amplified(const ShiftedLattice& lat, std::uint64_t f, const DgsOracleHandle& oracle,
                                     long double delta, Rng& rng) {
  const std::uint64_t runs = amplification_runs(f, delta);
  std::optional<RationalVector> best;
  for (std::uint64_t i = 0; i < runs; ++i) {
    RationalVector x = cvp_via_dgs(lat, f, oracle, rng);
    if (!best || shorter(x - lat.shift, *best - lat.shift)) best = std::move(x);
  }
  return *best;
}

long double svp_approximation_factor(std::size_t n, std::uint64_t f) {
  return 10 * std::sqrt(static_cast<long double>(n) / std::log(static_cast<long double>(f)));
}

SvpGrid svp_grid(const Basis& basis, std::uint64_t f) {
  if (f < 10) throw PreconditionViolated("svp_via_cdgs needs f >= 10");
  const std::size_t n = basis.dimension();
  const long double dn = static_cast<long double>(n);
  SvpGrid g;
  g.d_min = to_long_double(bit_length_bounds(basis).lambda1_lo);
  Rational shortest_col = basis.column(0).norm_sq();
  for (std::size_t i = 1; i < n; ++i) shortest_col = std::min(shortest_col, Rational(basis.column(i).norm_sq()));
  g.d_max = std::sqrt(to_long_double(shortest_col));
  g.samples_per_point = static_cast<std::uint64_t>(std::ceil(100 * dn * static_cast<long double>(f * f)));
  const long double root_log_f = std::sqrt(std::log(static_cast<long double>(f)));
  const long double ratio = 1 + 1 / (dn * dn);
  const long double top = 10 * g.d_max / root_log_f;
  const long double hi_bound = to_long_double(bit_length_bounds(basis).lambda1_hi);
  const std::uint64_t last =
      static_cast<std::uint64_t>(100 * dn * dn * std::ceil(std::log(hi_bound / g.d_min)));
  long double s = g.d_min / root_log_f;
  for (std::uint64_t i = 0; i <= last; ++i, s *= ratio) {
    g.s.push_back(rational_near(s));
    if (s > top) break;
  }
  return g;
}

SvpSearch svp_via_cdgs(const Basis& basis, std::uint64_t f, const DgsOracleHandle& oracle, Rng& rng) {
  if (oracle.kind != OracleKind::cdgs) throw PreconditionViolated("svp_via_cdgs needs a centered DGS oracle");
  const SvpGrid grid = svp_grid(basis, f);
  const ShiftedLattice lat(basis);
  SvpSearch out;
  auto consider = [&](const RationalVector& x) {
    if (x.is_zero()) return;
    if (out.vector && !shorter(x, *out.vector)) return;
    if (!is_lattice_member(basis, x)) return;
    out.vector = x;
  };
  for (const Rational& s : grid.s) {
    ++out.grid_points;
    out.samples += grid.samples_per_point;
    if (oracle.shortest_of_batch) {
      if (auto x = oracle.shortest_of_batch(basis, s, grid.samples_per_point, rng)) consider(*x);
    } else {
      for (std::uint64_t j = 0; j < grid.samples_per_point; ++j) consider(oracle.sample(lat, s, rng));
    }
  }
  return out;
}

}  // namespace dgslab
