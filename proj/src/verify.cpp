#include "dgslab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <set>
#include <sstream>

#include <boost/math/distributions/chi_squared.hpp>
#include <json.hpp>

#include "dgslab/errors.hpp"

namespace dgslab {

void EmpiricalHistogram::add(const RationalVector& x, std::uint64_t times) { add_key(x.key(), times); }

void EmpiricalHistogram::add_key(const std::string& key, std::uint64_t times) {
  counts[key] += times;
  total += times;
}

std::uint64_t EmpiricalHistogram::count_of(const RationalVector& x) const {
  const auto it = counts.find(x.key());
  return it == counts.end() ? 0 : it->second;
}

long double EmpiricalHistogram::frequency_of(const RationalVector& x) const {
  return total == 0 ? 0.0L : static_cast<long double>(count_of(x)) / static_cast<long double>(total);
}

EmpiricalHistogram collect(const std::function<RationalVector(Rng&)>& sampler, std::uint64_t n_samples, Rng& rng) {
  if (n_samples < 1) throw PreconditionViolated("collect needs at least one sample");
  EmpiricalHistogram h;
  for (std::uint64_t i = 0; i < n_samples; ++i) h.add(sampler(rng));
  return h;
}

ClosenessReport closeness_check(const EmpiricalHistogram& hist, const ExactDistribution& ideal, long double gamma,
                                long double eps, long double ratio_sigmas) {
  if (hist.total < 1000) throw PreconditionViolated("closeness_check needs at least 1000 samples");
  if (gamma < 1 || eps < 0) throw PreconditionViolated("closeness_check needs gamma >= 1 and eps >= 0");
  ClosenessReport rep;
  rep.gamma_budget = gamma;
  rep.eps_budget = eps;
  const long double total = static_cast<long double>(hist.total);

  std::set<std::string> seen;
  std::size_t heavy = 0;
  for (std::size_t i = 0; i < ideal.size(); ++i) {
    PointRow row;
    row.key = ideal.support()[i].key();
    row.ideal = ideal.probabilities()[i];
    const auto it = hist.counts.find(row.key);
    row.count = it == hist.counts.end() ? 0 : it->second;
    row.empirical = static_cast<long double>(row.count) / total;
    row.heavy = row.ideal * total >= 10;
    if (row.heavy) ++heavy;
    if (row.count > 0 || row.ideal * total * 10 >= 1) ++rep.effective_support;
    seen.insert(row.key);
    rep.points.push_back(std::move(row));
  }
  for (const auto& [key, c] : hist.counts) {
    if (seen.count(key)) continue;
    PointRow row;
    row.key = key;
    row.count = c;
    row.empirical = static_cast<long double>(c) / total;
    ++rep.effective_support;
    if (ideal.inside_support_bound(RationalVector::parse_key(key))) rep.out_of_support.push_back(key);
    rep.points.push_back(std::move(row));
  }

  std::vector<long double> diffs;
  diffs.reserve(rep.points.size());
  for (const auto& r : rep.points) diffs.push_back(std::fabs(r.empirical - r.ideal));
  rep.statistical_distance = compensated_sum(diffs) / 2;
  rep.se_slack = 3 * std::sqrt(static_cast<long double>(rep.effective_support) / total);
  rep.sd_ok = rep.statistical_distance <= eps + (1 - 1 / gamma) + rep.se_slack;

  const long double budget = std::log(200.0L * static_cast<long double>(std::max<std::size_t>(1, heavy)));
  rep.ratios_ok = true;
  for (auto& r : rep.points) {
    if (!r.heavy) continue;
    r.ratio = r.empirical / r.ideal;
    const long double mu = r.ideal * total;
    long double lo, hi;
    if (ratio_sigmas > 0) {
      lo = hi = ratio_sigmas * std::sqrt((1 - r.ideal) / mu);
    } else {
      // Pr[X >= (1+d) mu] <= e^{-d^2 mu / (2 + d)}, Pr[X <= (1-d) mu] <= e^{-d^2 mu / 2}.
      hi = (budget + std::sqrt(budget * budget + 8 * budget * mu)) / (2 * mu);
      lo = std::sqrt(2 * budget / mu);
    }
    r.ratio_low = std::max(0.0L, 1 - lo) / gamma;
    r.ratio_high = gamma * (1 + hi);
    r.ratio_ok = r.ratio <= r.ratio_high && r.ratio >= r.ratio_low;
    rep.ratios_ok = rep.ratios_ok && r.ratio_ok;
    const long double lr = r.ratio > 0 ? std::max(r.ratio, 1 / r.ratio) : INFINITY;
    rep.max_likelihood_ratio = std::max(rep.max_likelihood_ratio, lr);
  }
  rep.pass = rep.out_of_support.empty() && rep.sd_ok && rep.ratios_ok;
  return rep;
}

namespace {

std::string num(long double x) {
  std::ostringstream os;
  os << std::setprecision(12) << static_cast<double>(x);
  return os.str();
}

}  // namespace

std::string report_json(const ClosenessReport& rep) {
  nlohmann::ordered_json j;
  j["pass"] = rep.pass;
  j["statistical_distance"] = static_cast<double>(rep.statistical_distance);
  j["max_likelihood_ratio"] = static_cast<double>(rep.max_likelihood_ratio);
  j["gamma_budget"] = static_cast<double>(rep.gamma_budget);
  j["eps_budget"] = static_cast<double>(rep.eps_budget);
  j["se_slack"] = static_cast<double>(rep.se_slack);
  j["effective_support"] = rep.effective_support;
  j["sd_ok"] = rep.sd_ok;
  j["ratios_ok"] = rep.ratios_ok;
  j["out_of_support"] = rep.out_of_support;
  auto& pts = j["points"] = nlohmann::ordered_json::array();
  for (const auto& r : rep.points) {
    if (r.count == 0 && !r.heavy) continue;
    nlohmann::ordered_json p;
    p["key"] = r.key;
    p["ideal"] = static_cast<double>(r.ideal);
    p["empirical"] = static_cast<double>(r.empirical);
    p["count"] = r.count;
    if (r.heavy) {
      p["ratio"] = static_cast<double>(r.ratio);
      p["ratio_low"] = static_cast<double>(r.ratio_low);
      p["ratio_high"] = static_cast<double>(r.ratio_high);
      p["ratio_ok"] = r.ratio_ok;
    }
    pts.push_back(std::move(p));
  }
  return j.dump(2);
}

std::string report_csv(const ClosenessReport& rep) {
  std::ostringstream os;
  os << "key,count,empirical,ideal,heavy,ratio,ratio_ok\n";
  for (const auto& r : rep.points) {
    if (r.count == 0 && !r.heavy) continue;
    os << '"' << r.key << "\"," << r.count << ',' << num(r.empirical) << ',' << num(r.ideal) << ','
       << (r.heavy ? 1 : 0) << ',' << (r.heavy ? num(r.ratio) : "") << ',' << (r.ratio_ok ? 1 : 0) << '\n';
  }
  return os.str();
}

std::string histogram_csv(const EmpiricalHistogram& hist) {
  std::ostringstream os;
  os << "key,count\n";
  for (const auto& [key, c] : hist.counts) os << '"' << key << "\"," << c << '\n';
  return os.str();
}

ChiSquareResult chi_square(const std::vector<std::uint64_t>& observed, const std::vector<long double>& expected,
                           std::uint64_t total) {
  if (observed.size() != expected.size() || observed.empty() || total == 0)
    throw PreconditionViolated("chi_square needs matching nonempty cells");
  ChiSquareResult res;
  const long double n = static_cast<long double>(total);
  std::uint64_t seen = 0;
  long double mass = 0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const long double e = expected[i] * n;
    if (e <= 0) throw PreconditionViolated("chi_square cell with zero expectation");
    const long double d = static_cast<long double>(observed[i]) - e;
    res.statistic += d * d / e;
    seen += observed[i];
    mass += expected[i];
  }
  std::size_t cells = observed.size();
  const long double rest = 1 - mass;
  if (rest * n > 1e-9L) {
    const long double d = static_cast<long double>(total - seen) - rest * n;
    res.statistic += d * d / (rest * n);
    ++cells;
  }
  res.dof = cells - 1;
  if (res.dof == 0) return res;
  boost::math::chi_squared dist(static_cast<double>(res.dof));
  res.p_value = boost::math::cdf(boost::math::complement(dist, static_cast<double>(res.statistic)));
  return res;
}

}  // namespace dgslab
