#include "dgslab/oracles.hpp"

#include <algorithm>
#include <stdexcept>

#include "dgslab/exact_oracles.hpp"
#include "dgslab/primes.hpp"

namespace dgslab {

namespace {

constexpr std::size_t kScanFallbackPoints = 4'000'000;

std::vector<std::int64_t> integer_coords(const Basis& b, const RationalVector& x) {
  const RationalVector c = coords(b, x);
  std::vector<std::int64_t> v(c.dimension());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!is_integer(c[i])) throw std::logic_error("oracle answer is not a lattice member");
    if (!c[i].get_num().fits_slong_p()) throw std::overflow_error("oracle answer out of range");
    v[i] = c[i].get_num().get_si();
  }
  return v;
}

class ScanOracle : public SublatticeOracle {
 public:
  ScanOracle(const ShiftedLattice& lat, const NormBody& norm) : SublatticeOracle(lat, norm) {
    if (!norm.exact()) throw std::domain_error("scan oracle needs an exact norm");
  }

  std::optional<CosetPoint> closest(const SparsifiedPair& pair, std::optional<Int128> bound) override {
    return query(pair, bound, all_);
  }

  std::optional<CosetPoint> shortest(const SparsifiedPair& pair, std::optional<Int128> bound) override {
    if (pair.shifted() || !lat_.shift.is_zero()) throw std::invalid_argument("SVP query needs an unshifted pair");
    return query(pair, bound, nonzero_);
  }

  std::string backend() const override { return "scan"; }

 private:
  struct Cache {
    std::unique_ptr<PointCloud> cloud;
    std::int64_t maxabs = 0;
  };

  Int128 start_bound(bool nonzero) const {
    const std::size_t n = lat_.dimension();
    std::vector<std::int64_t> v(n, 0), u(n);
    Int128 best = -1;
    if (nonzero) {
      for (std::size_t i = 0; i < n; ++i) {
        std::fill(v.begin(), v.end(), 0);
        v[i] = 1;
        frame_->offset(v.data(), u.data());
        const Int128 k = IntegerFrame::key_of(norm_.kind(), u.data(), n);
        if (best < 0 || k < best) best = k;
      }
      return best;
    }
    const RationalVector c = coords(lat_.basis, lat_.shift);
    for (std::size_t i = 0; i < n; ++i) {
      const Rational r = floor_q(c[i] + frac(1, 2));
      if (!r.get_num().fits_slong_p()) throw std::overflow_error("target too far out");
      v[i] = r.get_num().get_si();
    }
    frame_->offset(v.data(), u.data());
    return IntegerFrame::key_of(norm_.kind(), u.data(), n);
  }

  void ensure(Cache& cache, Int128 bound, bool nonzero) {
    if (cache.cloud && cache.cloud->key_bound() >= bound) return;
    Int128 target = bound;
    if (cache.cloud) target = std::max(bound, cache.cloud->key_bound() * 2);
    cache.cloud = std::make_unique<PointCloud>(frame_, norm_, target, nonzero);
    cache.maxabs = 0;
    const std::size_t n = lat_.dimension();
    const std::int64_t* c = cache.cloud->size() ? cache.cloud->coords(0) : nullptr;
    for (std::size_t i = 0; i < cache.cloud->size() * n; ++i)
      cache.maxabs = std::max(cache.maxabs, c[i] < 0 ? -c[i] : c[i]);
  }

  // Index of the first point in [begin, end) lying in the pair's coset.
  std::optional<std::size_t> scan(const Cache& cache, const SparsifiedPair& pair, std::size_t begin,
                                  std::size_t end) const {
    if (begin >= end) return std::nullopt;
    const std::size_t n = lat_.dimension();
    const PointCloud& pc = *cache.cloud;
    if (pair.z_is_zero()) return begin;
    const std::uint64_t p = pair.prime();
    const unsigned __int128 m = static_cast<unsigned __int128>(n) * static_cast<std::uint64_t>(cache.maxabs) * (p - 1);
    if (p % 2 == 1 && m < (static_cast<unsigned __int128>(1) << 61)) {
      if (p != dt_prime_) {
        dt_ = DivisibilityTest(p);
        dt_prime_ = p;
      }
      const DivisibilityTest& dt = *dt_;
      std::int64_t z[16];
      for (std::size_t j = 0; j < n; ++j) z[j] = static_cast<std::int64_t>(pair.z()[j]);
      const std::int64_t bias = static_cast<std::int64_t>((static_cast<std::uint64_t>(m) / p + 1) * p) +
                                static_cast<std::int64_t>(pair.shift_residue());
      const std::int64_t* v = pc.coords(begin);
      for (std::size_t i = begin; i < end; ++i, v += n) {
        std::int64_t s = bias;
        for (std::size_t j = 0; j < n; ++j) s += z[j] * v[j];
        if (dt.divides(static_cast<std::uint64_t>(s))) return i;
      }
      return std::nullopt;
    }
    for (std::size_t i = begin; i < end; ++i)
      if (pair.in_coset(pc.coords(i))) return i;
    return std::nullopt;
  }

  CosetPoint make(const PointCloud& pc, std::size_t i) const {
    const std::size_t n = lat_.dimension();
    return CosetPoint{std::vector<std::int64_t>(pc.coords(i), pc.coords(i) + n), pc.key(i)};
  }

  std::optional<CosetPoint> query(const SparsifiedPair& pair, std::optional<Int128> bound, Cache& cache) {
    if (pair.z().size() != lat_.dimension()) throw std::invalid_argument("pair dimension mismatch");
    if (lat_.dimension() > 16) throw std::invalid_argument("dimension too large for the scan oracle");
    const bool nonzero = &cache == &nonzero_;
    if (bound) {
      if (*bound < 0) return std::nullopt;
      ensure(cache, *bound, nonzero);
      const std::size_t end = cache.cloud->count_within(*bound);
      const auto i = scan(cache, pair, 0, end);
      if (!i) return std::nullopt;
      return make(*cache.cloud, *i);
    }
    Int128 b = start_bound(nonzero);
    std::size_t done = 0;
    while (true) {
      ensure(cache, b, nonzero);
      const PointCloud& pc = *cache.cloud;
      if (const auto i = scan(cache, pair, done, pc.size())) return make(pc, *i);
      done = pc.size();
      if (done > kScanFallbackPoints) break;
      b = pc.key_bound() * (norm_.kind() == NormKind::l2 ? 4 : 2) + 1;
    }
    auto fallback = make_enumeration_oracle(lat_, norm_);
    return nonzero ? fallback->shortest(pair, std::nullopt) : fallback->closest(pair, std::nullopt);
  }

  Cache all_, nonzero_;
  mutable std::optional<DivisibilityTest> dt_;
  mutable std::uint64_t dt_prime_ = 0;
};

class EnumerationOracle : public SublatticeOracle {
 public:
  using SublatticeOracle::SublatticeOracle;

  std::optional<CosetPoint> closest(const SparsifiedPair& pair, std::optional<Int128> bound) override {
    const Basis& sub = pair.z_is_zero() ? lat_.basis : pair.sublattice();
    const RationalVector w = pair.shift_vector();
    const RationalVector y_prime = solve_cvp(ShiftedLattice(sub, lat_.shift + w), norm_);
    return finish(y_prime - w, bound);
  }

  std::optional<CosetPoint> shortest(const SparsifiedPair& pair, std::optional<Int128> bound) override {
    if (pair.shifted() || !lat_.shift.is_zero()) throw std::invalid_argument("SVP query needs an unshifted pair");
    const Basis& sub = pair.z_is_zero() ? lat_.basis : pair.sublattice();
    return finish(shortest_vector(sub, norm_), bound);
  }

  std::string backend() const override { return "enumeration"; }

 private:
  std::optional<CosetPoint> finish(const RationalVector& y, std::optional<Int128> bound) const {
    CosetPoint out;
    out.key = scaled_key(norm_.key(y - lat_.shift));
    if (bound && out.key > *bound) return std::nullopt;
    out.coords = integer_coords(lat_.basis, y);
    return out;
  }
};

class AuditedOracle : public SublatticeOracle {
 public:
  AuditedOracle(std::unique_ptr<SublatticeOracle> inner, std::shared_ptr<OracleAudit> audit, std::uint64_t first,
                std::uint64_t every)
      : SublatticeOracle(inner->lattice(), inner->norm()),
        inner_(std::move(inner)),
        audit_(std::move(audit)),
        first_(first),
        every_(every) {}

  std::optional<CosetPoint> closest(const SparsifiedPair& pair, std::optional<Int128> bound) override {
    check_pair(pair, false);
    auto out = inner_->closest(pair, bound);
    check_answer(pair, out, bound);
    return out;
  }

  std::optional<CosetPoint> shortest(const SparsifiedPair& pair, std::optional<Int128> bound) override {
    check_pair(pair, true);
    auto out = inner_->shortest(pair, bound);
    check_answer(pair, out, bound);
    if (out && std::all_of(out->coords.begin(), out->coords.end(), [](std::int64_t x) { return x == 0; }))
      violation("SVP answer is zero");
    return out;
  }

  std::string backend() const override { return "audited " + inner_->backend(); }

 private:
  void violation(const std::string& what) {
    ++audit_->violations;
    if (audit_->messages.size() < 16) audit_->messages.push_back(what);
  }

  void check_pair(const SparsifiedPair& pair, bool unshifted) {
    const std::uint64_t k = audit_->calls++;
    if (!(pair.parent() == lat_.basis)) violation("query on a lattice other than the input lattice");
    if (pair.prime() != last_prime_) {
      if (!is_prime(pair.prime())) violation("modulus is not prime");
      last_prime_ = pair.prime();
    }
    for (std::size_t i = 0; i < pair.z().size(); ++i)
      if (pair.z()[i] >= pair.prime() || pair.c()[i] >= pair.prime()) violation("z or c not reduced mod p");
    if (unshifted && pair.shifted()) violation("SVP query with a shifted pair");
    if (k < first_ || (every_ && k % every_ == 0)) materialize(pair);
  }

  void materialize(const SparsifiedPair& pair) {
    ++audit_->materialized_checks;
    const Basis sub = sparsify_basis(pair.parent(), pair.prime(), pair.z());
    const std::size_t n = sub.dimension();
    for (std::size_t i = 0; i < n; ++i) {
      const RationalVector col = sub.column(i);
      if (!is_lattice_member(lat_.basis, col)) {
        violation("sublattice column outside the input lattice");
        return;
      }
      const SparsifiedPair plain(pair.parent(), pair.prime(), pair.z(), {});
      if (!plain.in_coset(col)) violation("sublattice column fails the congruence");
    }
    const Rational ratio = sub.determinant() / lat_.basis.determinant();
    const Rational want = pair.z_is_zero() ? Rational(1) : Rational(static_cast<unsigned long>(pair.prime()));
    if (abs_q(ratio) != want) violation("sublattice index differs from p");
  }

  void check_answer(const SparsifiedPair& pair, const std::optional<CosetPoint>& out, std::optional<Int128> bound) {
    if (!out) return;
    if (bound && out->key > *bound) violation("answer beyond the requested bound");
    if (!pair.in_coset(out->coords.data())) violation("answer outside the queried coset");
  }

  std::unique_ptr<SublatticeOracle> inner_;
  std::shared_ptr<OracleAudit> audit_;
  std::uint64_t first_, every_;
  std::uint64_t last_prime_ = 0;
};

}  // namespace

SublatticeOracle::SublatticeOracle(ShiftedLattice lat, NormBody norm)
    : lat_(std::move(lat)), norm_(norm), frame_(std::make_shared<const IntegerFrame>(lat_)) {}

SparsifiedPair SublatticeOracle::whole_lattice() const {
  return SparsifiedPair(lat_.basis, 3, std::vector<std::uint64_t>(lat_.dimension(), 0), {});
}

std::unique_ptr<SublatticeOracle> make_scan_oracle(const ShiftedLattice& lat, const NormBody& norm) {
  return std::make_unique<ScanOracle>(lat, norm);
}

std::unique_ptr<SublatticeOracle> make_enumeration_oracle(const ShiftedLattice& lat, const NormBody& norm) {
  return std::make_unique<EnumerationOracle>(lat, norm);
}

OracleFactory scan_oracle_factory() { return make_scan_oracle; }
OracleFactory enumeration_oracle_factory() { return make_enumeration_oracle; }

OracleFactory audited_factory(OracleFactory inner, std::shared_ptr<OracleAudit> audit, std::uint64_t materialize_first,
                              std::uint64_t materialize_every) {
  return [inner = std::move(inner), audit = std::move(audit), materialize_first, materialize_every](
             const ShiftedLattice& lat, const NormBody& norm) -> std::unique_ptr<SublatticeOracle> {
    return std::make_unique<AuditedOracle>(inner(lat, norm), audit, materialize_first, materialize_every);
  };
}

}  // namespace dgslab
