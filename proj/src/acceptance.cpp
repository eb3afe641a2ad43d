#include "dgslab/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>
#include <unordered_map>

#include "dgslab/counting.hpp"
#include "dgslab/exact_oracles.hpp"
#include "dgslab/gaussian.hpp"
#include "dgslab/general_norms.hpp"
#include "dgslab/reductions.hpp"
#include "dgslab/samplers.hpp"
#include "dgslab/sparsifier.hpp"
#include "dgslab/verify.hpp"

namespace dgslab {

namespace {

using json = nlohmann::ordered_json;

RationalVector rvec(std::initializer_list<const char*> xs) {
  std::vector<Rational> v;
  for (const char* x : xs) v.push_back(parse_rational(x));
  return RationalVector(std::move(v));
}

Basis columns(std::initializer_list<std::initializer_list<long>> cols) {
  std::vector<RationalVector> c;
  for (auto col : cols) {
    std::vector<Rational> v;
    for (long x : col) v.emplace_back(x);
    c.emplace_back(std::move(v));
  }
  return Basis(std::move(c));
}

ShiftedLattice find_corpus(const std::string& name) {
  for (auto& lat : acceptance_corpus())
    if (lat.name == name) return lat;
  throw std::logic_error("no corpus lattice " + name);
}

// (1/5, 7/10, 5/4) cut to the dimension.
RationalVector generic_target(std::size_t n) {
  const RationalVector full = rvec({"1/5", "7/10", "5/4"});
  RationalVector t(n);
  for (std::size_t i = 0; i < n; ++i) t[i] = full[i % 3];
  return t;
}

std::string fmt(long double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6Lg", x);
  return buf;
}

long double binomial_se(long double p, std::uint64_t n) {
  return std::sqrt(std::max<long double>(p * (1 - p), 0) / static_cast<long double>(n));
}

// s = factor * lambda_1, exact when lambda_1^2 is a rational square and
// otherwise rounded to a multiple of 1/1024.
Rational lambda_multiple(const Basis& b, const Rational& factor) {
  const Rational l1_sq = solve_svp(b).lambda1_sq;
  const mpz_class& num = l1_sq.get_num();
  const mpz_class& den = l1_sq.get_den();
  if (mpz_perfect_square_p(num.get_mpz_t()) && mpz_perfect_square_p(den.get_mpz_t())) {
    mpz_class a, d;
    mpz_sqrt(a.get_mpz_t(), num.get_mpz_t());
    mpz_sqrt(d.get_mpz_t(), den.get_mpz_t());
    Rational root(a, d);
    root.canonicalize();
    return factor * root;
  }
  const long double s = to_long_double(factor) * std::sqrt(to_long_double(l1_sq));
  return frac(std::lround(s * 1024), 1024);
}

// Membership of every emitted value, checked once per distinct value and
// counted once per sample.
void check_members(StructuralTally& tally, const ShiftedLattice& lat, const EmpiricalHistogram& hist,
                   bool offsets) {
  for (const auto& [key, count] : hist.counts) {
    RationalVector x = RationalVector::parse_key(key);
    if (offsets) x = x + lat.shift;
    tally.samples_checked += count;
    if (!is_lattice_member(lat.basis, x)) {
      tally.membership_failures += count;
      if (tally.messages.size() < 16) tally.messages.push_back("non-member " + x.key() + " of " + lat.name);
    }
  }
}

void check_member(StructuralTally& tally, const Basis& b, const RationalVector& x, const std::string& where) {
  ++tally.samples_checked;
  if (!is_lattice_member(b, x)) {
    ++tally.membership_failures;
    if (tally.messages.size() < 16) tally.messages.push_back("non-member " + x.key() + " in " + where);
  }
}

void check_handle(StructuralTally& tally, const DgsOracleHandle& h, const std::string& expected) {
  tally.handle_calls += h.log->calls;
  for (const auto& key : h.log->lattices) {
    if (key == expected) continue;
    ++tally.foreign_handle_lattices;
    if (tally.messages.size() < 16) tally.messages.push_back(h.name + " queried " + key);
  }
}

OracleFactory audited(StructuralTally& tally) { return audited_factory(scan_oracle_factory(), tally.audit); }

json closeness_json(const ClosenessReport& rep) { return json::parse(report_json(rep)); }

// ---------------------------------------------------------------------------

struct VectorSet {
  std::vector<std::int64_t> x;
  std::vector<std::vector<std::int64_t>> ys;
};

std::vector<VectorSet> sparsification_sets(std::size_t n) {
  if (n == 2)
    return {{{0, 0}, {{1, 0}, {0, 1}, {-1, 0}, {0, -1}}},
            {{1, 0}, {{0, 0}, {0, 1}, {1, 1}}},
            {{0, 0}, {{1, 0}, {0, 1}, {1, 1}, {-1, -1}, {2, 1}}},
            {{2, 1}, {{1, 0}, {0, 1}, {1, -1}}},
            {{1, 2}, {{-1, 1}, {0, 0}, {1, 1}, {2, 2}}}};
  return {{{0, 0, 0}, {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}}},
          {{1, 0, 0}, {{0, 1, 0}, {0, 0, 1}, {1, 1, 0}}},
          {{1, 1, 1}, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, -1, 0}}},
          {{2, 0, 1}, {{1, 1, 1}}},
          {{0, 0, 0}, {{1, 1, 0}, {1, 0, 1}, {0, 1, 1}, {1, 1, 1}, {-1, 0, 0}, {0, 0, 2}}}};
}

CriterionResult criterion_1(const AcceptanceOptions&, StructuralTally&) {
  CriterionResult r;
  json rows = json::array();
  std::size_t checked = 0, failed = 0;
  for (std::uint64_t p : {3u, 5u, 7u}) {
    for (std::size_t n : {2u, 3u}) {
      const auto sets = sparsification_sets(n);
      for (std::size_t k = 0; k < sets.size(); ++k) {
        const VectorSet& set = sets[k];
        bool distinct = true;
        for (const auto& y : set.ys) {
          bool same = true;
          for (std::size_t j = 0; j < n; ++j) same = same && (set.x[j] - y[j]) % static_cast<std::int64_t>(p) == 0;
          distinct = distinct && !same;
        }
        const EventCount e = sparsification_event(p, set.x, set.ys, true);
        const Rational inv = frac(1, static_cast<long>(p));
        Rational inv_n = 1, inv_n1 = 1;
        for (std::size_t j = 0; j < n; ++j) inv_n *= inv;
        for (std::size_t j = 0; j + 1 < n; ++j) inv_n1 *= inv;
        const Rational big_n(static_cast<long>(set.ys.size()));
        const Rational lo = inv - big_n * inv * inv - big_n * inv_n1;
        const Rational hi = inv + inv_n;
        const Rational pr = e.probability();
        const bool ok = distinct && lo <= pr && pr <= hi;
        ++checked;
        failed += !ok;
        json row;
        row["p"] = p;
        row["n"] = n;
        row["instance"] = k;
        row["N"] = set.ys.size();
        row["hits"] = e.hits;
        row["total"] = e.total;
        row["probability"] = to_string(pr);
        row["lower"] = to_string(lo);
        row["upper"] = to_string(hi);
        row["hypothesis"] = distinct;
        row["pass"] = ok;
        rows.push_back(row);
      }
    }
  }
  r.pass = failed == 0;
  r.summary = std::to_string(checked - failed) + "/" + std::to_string(checked) + " exact event probabilities inside the interval";
  r.report["rows"] = rows;
  return r;
}

CriterionResult criterion_2(const AcceptanceOptions& opt, StructuralTally& tally) {
  CriterionResult r;
  Rng rng = Rng(opt.seed, "acceptance").split(2);
  const std::uint64_t p = 101, trials = opt.samples ? opt.samples : 100000;
  const long double pl = static_cast<long double>(p);
  const long double n_cap = pl / (20 * std::log(pl));
  json rows = json::array();
  std::size_t targets = 0, failed = 0;
  for (const std::string name : {"Z2", "figure1"}) {
    const ShiftedLattice lat = find_corpus(name);
    const std::size_t n = lat.dimension();
    auto oracle = audited(tally)(lat, NormBody::l2());
    Rational max_col = 0;
    for (std::size_t i = 0; i < n; ++i) max_col = std::max(max_col, Rational(lat.basis.column(i).norm_sq()));
    const BallEnumeration ball = enumerate_ball(lat, max_col);
    std::vector<const BallPoint*> primitive;
    for (const auto& pt : ball.points)
      if (!pt.point.is_zero() && is_primitive(lat.basis, pt.point)) primitive.push_back(&pt);
    const Rational l1_sq = solve_svp(lat.basis).lambda1_sq;
    struct Target {
      RationalVector x;
      std::uint64_t big_n;
      std::uint64_t hits = 0;
    };
    std::vector<Target> chosen;
    for (const BallPoint* pt : primitive) {
      // one representative per +-pair: first nonzero coordinate positive
      std::size_t j = 0;
      while (pt->point[j] == 0) ++j;
      if (pt->point[j] < 0) continue;
      std::uint64_t within = 0;
      for (const BallPoint* q : primitive) within += q->key <= pt->key;
      const std::uint64_t xi = within / 2;
      const std::uint64_t big_n = xi - 1;
      const bool hypothesis = static_cast<long double>(big_n) <= n_cap && l1_sq * Rational(p * p) > pt->key;
      if (hypothesis) chosen.push_back({pt->point, big_n});
    }
    SparsifiedPair pair(lat.basis, p, std::vector<std::uint64_t>(n), std::vector<std::uint64_t>(n));
    std::unordered_map<std::string, std::uint64_t> seen;
    for (std::uint64_t i = 0; i < trials; ++i) {
      pair.redraw(rng, false);
      const auto y = oracle->shortest(pair, std::nullopt);
      if (!y) throw std::logic_error("SVP oracle returned nothing");
      const RationalVector pt = oracle->point_of(*y);
      ++seen[pt.key()];
      for (auto& t : chosen)
        if (pt == t.x || pt == -t.x) ++t.hits;
    }
    EmpiricalHistogram hist;
    for (const auto& [k, c] : seen) hist.add_key(k, c);
    check_members(tally, lat, hist, false);
    const long double se = binomial_se(1 / pl, trials);
    for (const auto& t : chosen) {
      const long double freq = static_cast<long double>(t.hits) / static_cast<long double>(trials);
      const long double lo = 1 / pl - static_cast<long double>(t.big_n) / (pl * pl), hi = 1 / pl;
      const bool ok = freq >= lo - 3 * se && freq <= hi + 3 * se;
      ++targets;
      failed += !ok;
      json row;
      row["lattice"] = name;
      row["x"] = t.x.key();
      row["N"] = t.big_n;
      row["frequency"] = static_cast<double>(freq);
      row["lower"] = static_cast<double>(lo);
      row["upper"] = static_cast<double>(hi);
      row["se"] = static_cast<double>(se);
      row["pass"] = ok;
      rows.push_back(row);
    }
  }
  r.pass = targets > 0 && failed == 0;
  r.summary = std::to_string(targets - failed) + "/" + std::to_string(targets) + " shortest-vector frequencies inside the interval +-3 SE (p = 101, " +
              std::to_string(trials) + " trials)";
  r.report["rows"] = rows;
  return r;
}

CriterionResult criterion_3(const AcceptanceOptions& opt, StructuralTally& tally) {
  CriterionResult r;
  Rng rng = Rng(opt.seed, "acceptance").split(3);
  Rng pick = rng.split(0);
  const long double f = 2, gamma = 1 + 1 / f;
  const CountingParams params = opt.faithful_counting ? CountingParams::faithful() : CountingParams::desk();
  const std::size_t instances = 200, runs = 15;
  std::vector<ShiftedLattice> pool;
  for (auto& lat : acceptance_corpus())
    if (lat.dimension() >= 2) pool.push_back(lat);
  std::size_t made = 0, wrong_runs = 0, wrong_majorities = 0;
  json rows = json::array();
  while (made < instances) {
    const ShiftedLattice& base = pool[pick.uniform_below(pool.size())];
    RationalVector t(base.dimension());
    for (std::size_t i = 0; i < t.dimension(); ++i) t[i] = frac(static_cast<long>(pick.uniform_below(12)), 12);
    const ShiftedLattice lat(base.basis, t, base.name);
    const Rational radius_sq = frac(static_cast<long>(4 + pick.uniform_below(29)), 8);
    const std::uint64_t count = enumerate_ball(lat, radius_sq).size();
    const bool yes = made % 2 == 0;
    std::uint64_t big_n = count;
    if (yes) {
      big_n = static_cast<std::uint64_t>(std::ceil(static_cast<long double>(count) / gamma)) - 1;
      if (big_n < 1 || !(static_cast<long double>(count) > gamma * static_cast<long double>(big_n))) continue;
    }
    if (big_n < 1) continue;
    ++made;
    GapInstance inst{lat, radius_sq, big_n, gamma, 0};
    auto oracle = audited(tally)(lat, NormBody::l2());
    std::size_t yes_votes = 0, wrong = 0;
    for (std::size_t k = 0; k < runs; ++k) {
      const bool answer = gap_vcp_decide(inst, *oracle, f, rng, params);
      yes_votes += answer;
      wrong += answer != yes;
    }
    const bool majority_wrong = (2 * yes_votes > runs) != yes;
    wrong_runs += wrong;
    wrong_majorities += majority_wrong;
    json row;
    row["lattice"] = lat.name;
    row["shift"] = t.key();
    row["radius_sq"] = to_string(radius_sq);
    row["count"] = count;
    row["N"] = big_n;
    row["truth"] = yes ? "yes" : "no";
    row["yes_votes"] = yes_votes;
    rows.push_back(row);
  }
  const long double single = static_cast<long double>(wrong_runs) / static_cast<long double>(instances * runs);
  const long double majority = static_cast<long double>(wrong_majorities) / static_cast<long double>(instances);
  const long double single_cap = std::exp(-1.0L) + 0.05L;
  r.pass = single <= single_cap && majority <= 0.01L;
  r.summary = "single-run error " + fmt(single) + " (<= " + fmt(single_cap) + "), majority-of-15 error " + fmt(majority) +
              " (<= 0.01), " + params.name() + " constants, f = 2";
  r.report["preset"] = params.name();
  r.report["single_run_error"] = static_cast<double>(single);
  r.report["majority_error"] = static_cast<double>(majority);
  r.report["instances"] = rows;
  return r;
}

ExactDistribution tampered(const ExactDistribution& d) {
  // 0.2 of the mass moves onto the least likely support point.
  std::vector<long double> w(d.probabilities());
  const auto light = std::min_element(w.begin(), w.end()) - w.begin();
  for (auto& x : w) x *= 0.8L;
  w[static_cast<std::size_t>(light)] += 0.2L;
  return ExactDistribution(d.support(), w, d.norm(), d.support_key_bound(), d.truncated_mass_bound());
}

const std::vector<std::pair<const char*, Rational>>& lambda_factors() {
  static const std::vector<std::pair<const char*, Rational>> f = {{"0.5", frac(1, 2)}, {"1", Rational(1)}, {"5", Rational(5)}};
  return f;
}

struct FidelityRun {
  bool pass = false;
  json row;
};

FidelityRun fidelity(const ShiftedLattice& lat, const Rational& s, const char* factor, const EmpiricalHistogram& hist,
                     const ExactDistribution& ideal) {
  const long double gamma = 1.1L, eps = std::exp2(-10.0L);
  const ClosenessReport rep = closeness_check(hist, ideal, gamma, eps, 3);
  FidelityRun out;
  out.pass = rep.out_of_support.empty() && rep.statistical_distance <= 0.10L && rep.ratios_ok;
  out.row["lattice"] = lat.name;
  out.row["shift"] = lat.shift.key();
  out.row["s"] = to_string(s);
  out.row["s_over_lambda1"] = factor;
  out.row["statistical_distance"] = static_cast<double>(rep.statistical_distance);
  out.row["ratios_ok"] = rep.ratios_ok;
  out.row["out_of_support"] = rep.out_of_support.size();
  out.row["pass"] = out.pass;
  out.row["closeness"] = closeness_json(rep);
  return out;
}

CriterionResult criterion_4(const AcceptanceOptions& opt, StructuralTally& tally) {
  CriterionResult r;
  Rng rng = Rng(opt.seed, "acceptance").split(4);
  const std::uint64_t n_samples = opt.samples ? opt.samples : 100000;
  const std::vector<ShiftedLattice> lats = {
      find_corpus("Z2"), figure1_deep_hole(),
      ShiftedLattice(find_corpus("random3").basis, rvec({"1/2", "1/3", "0"}), "random3")};
  SamplerConfig sc;
  sc.f = 10;
  sc.counts = CountMode::exact;
  json rows = json::array();
  std::size_t runs = 0, failed = 0;
  long double worst_sd = 0;
  for (const auto& lat : lats) {
    for (const auto& [label, factor] : lambda_factors()) {
      const Rational s = lambda_multiple(lat.basis, factor);
      DgsSampler dgs(lat, s, sc, audited(tally), rng);
      const EmpiricalHistogram hist = collect([&](Rng& g) { return dgs.sample(g); }, n_samples, rng);
      check_members(tally, lat, hist, true);
      ExactDistribution ideal = exact_dgs(lat, s);
      if (opt.tamper) ideal = tampered(ideal);
      FidelityRun run = fidelity(lat, s, label, hist, ideal);
      ++runs;
      failed += !run.pass;
      worst_sd = std::max<long double>(worst_sd, run.row["statistical_distance"].get<double>());
      rows.push_back(run.row);
    }
  }
  r.pass = failed == 0;
  r.summary = std::to_string(runs - failed) + "/" + std::to_string(runs) + " runs pass, worst SD " + fmt(worst_sd) +
              " (<= 0.10), ratios within 1.1(1 + 3 SE)" + (opt.tamper ? " [tampered tables]" : "");
  r.report["runs"] = rows;
  return r;
}

CriterionResult criterion_5(const AcceptanceOptions& opt, StructuralTally& tally) {
  CriterionResult r;
  Rng rng = Rng(opt.seed, "acceptance").split(5);
  const std::uint64_t n_samples = opt.samples ? opt.samples : 100000;
  SamplerConfig sc;
  sc.f = 10;
  sc.counts = CountMode::exact;
  json rows = json::array();
  std::size_t runs = 0, failed = 0;
  long double worst_sd = 0, worst_zero = 0;
  for (const std::string name : {"Z1", "Z2", "figure1", "random3"}) {
    const ShiftedLattice lat = find_corpus(name);
    const RationalVector zero(lat.dimension());
    for (const auto& [label, factor] : lambda_factors()) {
      const Rational s = lambda_multiple(lat.basis, factor);
      CdgsSampler cdgs(lat.basis, s, sc, audited(tally), rng);
      const EmpiricalHistogram hist = collect([&](Rng& g) { return cdgs.sample(g); }, n_samples, rng);
      check_members(tally, lat, hist, false);
      const ExactDistribution ideal = exact_dgs(lat, s);
      FidelityRun run = fidelity(lat, s, label, hist, ideal);
      const long double p0 = ideal.probability_of(zero), freq0 = hist.frequency_of(zero);
      const long double se = binomial_se(p0, n_samples);
      const bool zero_ok = std::fabs(freq0 - p0) <= 3 * se;
      run.row["zero_probability"] = static_cast<double>(p0);
      run.row["zero_frequency"] = static_cast<double>(freq0);
      run.row["zero_se"] = static_cast<double>(se);
      run.row["zero_ok"] = zero_ok;
      run.pass = run.pass && zero_ok;
      run.row["pass"] = run.pass;
      ++runs;
      failed += !run.pass;
      worst_sd = std::max<long double>(worst_sd, run.row["statistical_distance"].get<double>());
      if (se > 0) worst_zero = std::max(worst_zero, std::fabs(freq0 - p0) / se);
      rows.push_back(run.row);
    }
  }
  r.pass = failed == 0;
  r.summary = std::to_string(runs - failed) + "/" + std::to_string(runs) + " runs pass, worst SD " + fmt(worst_sd) +
              ", worst |Pr[0] - 1/rho| " + fmt(worst_zero) + " SE (<= 3)";
  r.report["runs"] = rows;
  return r;
}

CriterionResult criterion_6(const AcceptanceOptions& opt, StructuralTally& tally) {
  CriterionResult r;
  Rng rng = Rng(opt.seed, "acceptance").split(6);
  const std::uint64_t n = opt.samples ? opt.samples : 1000000;
  const long double nl = static_cast<long double>(n);
  json rows = json::array();
  bool all = true;
  long double worst_p = 1;
  for (const auto& [label, s] : std::vector<std::pair<const char*, long double>>{{"1/2", 0.5L}, {"1", 1}, {"3", 3}}) {
    std::map<std::int64_t, std::uint64_t> counts;
    long double it_sum = 0, it_sq = 0;
    for (std::uint64_t i = 0; i < n; ++i) {
      std::uint64_t it = 0;
      const std::int64_t z = sample_z_nonzero(s, rng, &it);
      ++counts[z];
      it_sum += static_cast<long double>(it);
      it_sq += static_cast<long double>(it) * static_cast<long double>(it);
      ++tally.samples_checked;
      if (z == 0) ++tally.membership_failures;
    }
    // rho_s(Z \ {0}) summed here, not taken from the library.
    long double rho = 0;
    for (std::int64_t k = 1; k < 1000; ++k) {
      const long double term = 2 * std::exp(-M_PIl * static_cast<long double>(k * k) / (s * s));
      rho += term;
      if (term < 1e-30L) break;
    }
    std::vector<std::uint64_t> observed;
    std::vector<long double> expected;
    for (std::int64_t k = 1;; ++k) {
      const long double pk = std::exp(-M_PIl * static_cast<long double>(k * k) / (s * s)) / rho;
      if (pk * nl < 5) break;
      for (std::int64_t z : {k, -k}) {
        observed.push_back(counts.count(z) ? counts[z] : 0);
        expected.push_back(pk);
      }
    }
    const ChiSquareResult chi = chi_square(observed, expected, n);
    const long double mean = it_sum / nl;
    const long double sd = std::sqrt(std::max<long double>(it_sq / nl - mean * mean, 0));
    const long double it_cap = 2 + 3 * sd / std::sqrt(nl);
    const bool ok = chi.p_value >= 1e-3L && mean <= it_cap && counts.count(0) == 0;
    all = all && ok;
    worst_p = std::min(worst_p, chi.p_value);
    json row;
    row["s"] = label;
    row["chi_square"] = static_cast<double>(chi.statistic);
    row["dof"] = chi.dof;
    row["p_value"] = static_cast<double>(chi.p_value);
    row["mean_iterations"] = static_cast<double>(mean);
    row["iteration_cap"] = static_cast<double>(it_cap);
    row["pass"] = ok;
    rows.push_back(row);
  }
  r.pass = all;
  r.summary = "smallest chi-square p-value " + fmt(worst_p) + " (>= 1e-3) over s in {1/2, 1, 3}, " + std::to_string(n) +
              " draws each; mean iterations within 2 + 3 SE";
  r.report["rows"] = rows;
  return r;
}

std::vector<ShiftedLattice> cvp_instances() {
  std::vector<ShiftedLattice> out;
  for (const auto& lat : acceptance_corpus()) out.emplace_back(lat.basis, generic_target(lat.dimension()), lat.name);
  out.push_back(figure1_deep_hole());
  return out;
}

CriterionResult criterion_7(const AcceptanceOptions& opt, StructuralTally& tally) {
  CriterionResult r;
  Rng rng = Rng(opt.seed, "acceptance").split(7);
  const std::uint64_t f = 3, trials = 2000;
  const long double floor_p = 1.0L / (2 * f * f);
  const long double se = binomial_se(floor_p, trials);
  json rows = json::array();
  std::size_t failed = 0;
  long double worst = 1;
  const auto instances = cvp_instances();
  for (const auto& lat : instances) {
    DgsOracleHandle h = exact_dgs_handle(OracleKind::dgs);
    const Rational d_sq = cvp_distance_sq(lat);
    std::uint64_t hits = 0;
    for (std::uint64_t i = 0; i < trials; ++i) {
      const RationalVector x = cvp_via_dgs(lat, f, h, rng);
      check_member(tally, lat.basis, x, lat.name);
      hits += (x - lat.shift).norm_sq() == d_sq;
    }
    check_handle(tally, h, lattice_key(lat));
    const long double freq = static_cast<long double>(hits) / trials;
    const bool ok = freq >= floor_p - 3 * se;
    failed += !ok;
    worst = std::min(worst, freq);
    json row;
    row["lattice"] = lat.name;
    row["target"] = lat.shift.key();
    row["s"] = to_string(cvp_parameters(lat, f).s);
    row["success_frequency"] = static_cast<double>(freq);
    row["pass"] = ok;
    rows.push_back(row);
  }
  r.pass = failed == 0;
  r.summary = "lowest success frequency " + fmt(worst) + " (>= 1/18 - 3 SE = " + fmt(floor_p - 3 * se) + ") over " +
              std::to_string(instances.size()) + " instances";
  r.report["rows"] = rows;
  return r;
}

CriterionResult criterion_8(const AcceptanceOptions& opt, StructuralTally& tally) {
  CriterionResult r;
  Rng rng = Rng(opt.seed, "acceptance").split(8);
  const std::uint64_t f = 10, runs = 200;
  json rows = json::array();
  std::size_t failed_runs = 0, total_runs = 0;
  long double worst_ratio = 0;
  for (const auto& lat : acceptance_corpus()) {
    const std::size_t n = lat.dimension();
    const long double gamma = svp_approximation_factor(n, f);
    const Rational l1_exact = solve_svp(lat.basis).lambda1_sq;
    const long double l1_sq = to_long_double(l1_exact);
    DgsOracleHandle h = exact_dgs_handle(OracleKind::cdgs);
    std::size_t bad = 0, exact = 0;
    long double lattice_worst = 0;
    for (std::uint64_t i = 0; i < runs; ++i) {
      const SvpSearch res = svp_via_cdgs(lat.basis, f, h, rng);
      bool ok = res.vector.has_value() && !res.vector->is_zero();
      if (ok) {
        check_member(tally, lat.basis, *res.vector, lat.name);
        const long double ratio = std::sqrt(to_long_double(res.vector->norm_sq()) / l1_sq);
        lattice_worst = std::max(lattice_worst, ratio);
        ok = ratio <= gamma;
        exact += res.vector->norm_sq() == l1_exact;
      }
      bad += !ok;
    }
    check_handle(tally, h, lattice_key(lat));
    failed_runs += bad;
    total_runs += runs;
    worst_ratio = std::max(worst_ratio, lattice_worst);
    json row;
    row["lattice"] = lat.name;
    row["gamma"] = static_cast<double>(gamma);
    row["worst_ratio"] = static_cast<double>(lattice_worst);
    row["shortest_found"] = exact;
    row["failures"] = bad;
    rows.push_back(row);
  }
  r.pass = failed_runs == 0;
  r.summary = std::to_string(total_runs - failed_runs) + "/" + std::to_string(total_runs) +
              " runs within gamma lambda_1, worst ||x|| / lambda_1 = " + fmt(worst_ratio);
  r.report["rows"] = rows;
  return r;
}

CriterionResult criterion_9(const AcceptanceOptions& opt, StructuralTally& tally) {
  CriterionResult r;
  Rng rng = Rng(opt.seed, "acceptance").split(9);
  const std::uint64_t n_samples = opt.samples ? opt.samples : 100000;
  const long double nl = static_cast<long double>(n_samples);
  const std::vector<ShiftedLattice> lats = {
      ShiftedLattice(Basis::identity(2), rvec({"1/3", "1/5"}), "Z2"), figure1_deep_hole(),
      ShiftedLattice(find_corpus("random3").basis, rvec({"1/2", "1/3", "0"}), "random3")};
  const Rational s(1);
  const long double sl = 1;
  json rows = json::array();
  bool all = true;
  for (const auto& lat : lats) {
    const std::size_t n = lat.dimension();
    const long double dn = static_cast<long double>(n);
    const ExactDistribution ideal = exact_dgs(lat, s);
    const long double dist = std::sqrt(to_long_double(cvp_distance_sq(lat)));
    const long double radius = tail_hypothesis_radius(dist, sl, n);
    const long double bound = gaussian_tail_bound(dist, sl, n, radius);
    const long double edge = dist * dist + radius * radius * sl * sl * dn;
    const long double general = gaussian_tail_bound_general(dist, sl, n, 1);
    const long double general_edge = dist * dist + sl * sl * dn;
    EmpiricalHistogram hist;
    std::uint64_t tail = 0, general_tail = 0;
    for (std::uint64_t i = 0; i < n_samples; ++i) {
      const RationalVector y = ideal.sample(rng);
      hist.add(y);
      const long double sq = to_long_double(y.norm_sq());
      tail += sq >= edge;
      general_tail += sq >= general_edge;
    }
    check_members(tally, lat, hist, true);
    const long double freq = static_cast<long double>(tail) / nl, general_freq = static_cast<long double>(general_tail) / nl;
    const bool ok = freq <= bound + 3 * binomial_se(bound, n_samples);
    const bool general_ok = general_freq <= general + 3 * binomial_se(std::min<long double>(general, 1), n_samples);
    all = all && ok && general_ok;
    json row;
    row["lattice"] = lat.name;
    row["shift"] = lat.shift.key();
    row["r"] = static_cast<double>(radius);
    row["bound"] = static_cast<double>(bound);
    row["tail_frequency"] = static_cast<double>(freq);
    row["general_bound_r1"] = static_cast<double>(general);
    row["general_tail_frequency"] = static_cast<double>(general_freq);
    row["pass"] = ok && general_ok;
    rows.push_back(row);
  }
  r.pass = all;
  r.summary = "tail mass below e^{-r^2 n} + 3 SE at the smallest valid r on 3 instances (and below the general bound at r = 1)";
  r.report["rows"] = rows;
  return r;
}

CriterionResult criterion_10(const AcceptanceOptions& opt, StructuralTally& tally) {
  CriterionResult r;
  Rng rng = Rng(opt.seed, "acceptance").split(10);
  const std::uint64_t n_samples = opt.samples ? opt.samples : 100000;
  const ShiftedLattice lat = find_corpus("Z2");
  ChiQConfig config;
  config.f = 10;
  config.counts = CountMode::exact;
  config.factory = audited(tally);
  ChiQSampler sampler(lat, 1, config, rng);
  const EmpiricalHistogram hist = collect([&](Rng& g) { return sampler.sample(g); }, n_samples, rng);
  check_members(tally, lat, hist, true);
  const ClosenessReport rep = closeness_check(hist, exact_chi_q(lat, 1), 1.1L, std::exp(-10.0L), 3);
  const bool sd_ok = rep.out_of_support.empty() && rep.statistical_distance <= 0.10L;

  json cvp_rows = json::array();
  std::size_t cvp_checked = 0, cvp_failed = 0;
  for (const auto& base : acceptance_corpus()) {
    const std::size_t n = base.dimension();
    RationalVector half(n);
    for (std::size_t i = 0; i < n; ++i) half[i] = frac(1, static_cast<long>(i + 2));
    for (const RationalVector& t : {generic_target(n), half, RationalVector(n)}) {
      const ShiftedLattice inst(base.basis, t, base.name);
      const Rational via_k = (cvp_k(inst, NormBody::l2()) - t).norm_sq();
      const Rational direct = cvp_distance_sq(inst);
      ++cvp_checked;
      cvp_failed += via_k != direct;
      json row;
      row["lattice"] = base.name;
      row["target"] = t.key();
      row["cvp_k"] = to_string(via_k);
      row["solve_cvp"] = to_string(direct);
      cvp_rows.push_back(row);
    }
  }
  r.pass = sd_ok && cvp_failed == 0;
  r.summary = "chi_1 on Z2: SD " + fmt(rep.statistical_distance) + " (<= 0.10); cvp_k(l2) = solve_cvp distance on " +
              std::to_string(cvp_checked - cvp_failed) + "/" + std::to_string(cvp_checked) + " targets";
  r.report["closeness"] = closeness_json(rep);
  r.report["cvp"] = cvp_rows;
  return r;
}

CriterionResult criterion_11(const AcceptanceOptions&, StructuralTally& tally) {
  CriterionResult r;
  const OracleAudit& a = *tally.audit;
  r.pass = a.calls > 0 && a.violations == 0 && tally.membership_failures == 0 && tally.foreign_handle_lattices == 0;
  r.summary = std::to_string(a.calls) + " oracle calls (" + std::to_string(a.materialized_checks) + " materialized), " +
              std::to_string(a.violations) + " off-lattice; " + std::to_string(tally.handle_calls) + " DGS-oracle calls, " +
              std::to_string(tally.foreign_handle_lattices) + " on other lattices; " +
              std::to_string(tally.samples_checked) + " samples, " + std::to_string(tally.membership_failures) +
              " non-members";
  r.report["oracle_calls"] = a.calls;
  r.report["materialized_checks"] = a.materialized_checks;
  r.report["violations"] = a.violations;
  r.report["handle_calls"] = tally.handle_calls;
  r.report["foreign_handle_lattices"] = tally.foreign_handle_lattices;
  r.report["samples_checked"] = tally.samples_checked;
  r.report["membership_failures"] = tally.membership_failures;
  json messages = json::array();
  for (const auto& m : a.messages) messages.push_back(m);
  for (const auto& m : tally.messages) messages.push_back(m);
  r.report["messages"] = messages;
  return r;
}

}  // namespace

std::vector<ShiftedLattice> acceptance_corpus() {
  return {
      ShiftedLattice(Basis::identity(1), "Z1"),
      ShiftedLattice(Basis::identity(2), "Z2"),
      ShiftedLattice(Basis::identity(3), "Z3"),
      ShiftedLattice(Basis::diagonal({Rational(3), frac(1, 2)}), "figure1"),
      ShiftedLattice(columns({{2, 1, 0}, {-1, 2, 1}, {1, -1, 3}}), "random3"),
      ShiftedLattice(Basis(std::vector<RationalVector>{rvec({"1", "1/3"}), rvec({"-1/2", "5/4"})}), "rational2"),
      ShiftedLattice(columns({{1, 0}, {7, 1}}), "skew2"),
  };
}

ShiftedLattice figure1_deep_hole() {
  return ShiftedLattice(Basis::diagonal({Rational(3), frac(1, 2)}), rvec({"3/2", "1/4"}), "figure1");
}

std::vector<int> suite_criteria(const std::string& suite) {
  if (suite == "sparsifier") return {1, 2, 11};
  if (suite == "counting") return {3, 11};
  if (suite == "dgs") return {4, 9, 11};
  if (suite == "cdgs") return {5, 6, 11};
  if (suite == "reductions") return {7, 8, 11};
  if (suite == "lq") return {10, 11};
  if (suite == "all") return {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11};
  throw std::invalid_argument("unknown suite '" + suite + "'");
}

std::string criterion_title(int id) {
  switch (id) {
    case 1: return "shifted sparsification, exact";
    case 2: return "unshifted sparsification, SVP";
    case 3: return "GapVCP decisions";
    case 4: return "DGS from CVP";
    case 5: return "centered DGS from SVP";
    case 6: return "1-D sampler";
    case 7: return "CVP from DGS";
    case 8: return "SVP from centered DGS";
    case 9: return "Gaussian tail bound";
    case 10: return "l_q sampler";
    case 11: return "sublattice and membership";
    default: throw std::invalid_argument("no criterion " + std::to_string(id));
  }
}

CriterionResult run_criterion(int id, const AcceptanceOptions& options, StructuralTally& tally) {
  using Fn = CriterionResult (*)(const AcceptanceOptions&, StructuralTally&);
  static const Fn table[] = {criterion_1, criterion_2, criterion_3, criterion_4,  criterion_5, criterion_6,
                             criterion_7, criterion_8, criterion_9, criterion_10, criterion_11};
  const std::string title = criterion_title(id);
  const auto start = std::chrono::steady_clock::now();
  CriterionResult r = table[id - 1](options, tally);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  r.id = id;
  r.title = title;
  return r;
}

std::string criterion_line(const CriterionResult& r, bool with_time) {
  std::string line = std::string(r.pass ? "PASS" : "FAIL") + "  criterion " + std::to_string(r.id) + " (" + r.title +
                     "): " + r.summary;
  if (!with_time) return line;
  char secs[32];
  std::snprintf(secs, sizeof secs, " [%.1fs]", r.seconds);
  return line + secs;
}

}  // namespace dgslab
