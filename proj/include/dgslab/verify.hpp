#ifndef DGSLAB_VERIFY_HPP_
#define DGSLAB_VERIFY_HPP_

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "dgslab/exact_oracles.hpp"
#include "dgslab/rational.hpp"
#include "dgslab/rng.hpp"

namespace dgslab {

// Counts keyed by RationalVector::key(); std::map keeps reports ordered.
struct EmpiricalHistogram {
  std::map<std::string, std::uint64_t> counts;
  std::uint64_t total = 0;

  void add(const RationalVector& x, std::uint64_t times = 1);
  void add_key(const std::string& key, std::uint64_t times = 1);
  std::uint64_t count_of(const RationalVector& x) const;
  long double frequency_of(const RationalVector& x) const;
};

EmpiricalHistogram collect(const std::function<RationalVector(Rng&)>& sampler, std::uint64_t n_samples, Rng& rng);

struct PointRow {
  std::string key;
  long double ideal = 0;
  long double empirical = 0;
  std::uint64_t count = 0;
  bool heavy = false;       // ideal * total >= 10
  long double ratio = 0;    // empirical / ideal, heavy points only
  long double ratio_low = 0;   // accepted ratio window
  long double ratio_high = 0;
  bool ratio_ok = true;
};

struct ClosenessReport {
  long double statistical_distance = 0;
  long double max_likelihood_ratio = 1;  // max over heavy points of max(r, 1/r)
  std::vector<PointRow> points;
  bool pass = false;
  long double gamma_budget = 1;
  long double eps_budget = 0;
  long double se_slack = 0;
  std::size_t effective_support = 0;
  std::vector<std::string> out_of_support;  // observed keys the ideal rules out
  bool sd_ok = false;
  bool ratios_ok = false;
};

// Compares a histogram with an exact distribution.
//  * SD is computed exactly between the empirical and ideal masses.
//  * se_slack = 3 sqrt(k / total), k = number of points that were observed or
//    carry ideal mass >= 1/(10 total).
//  * SD passes when SD <= eps + (1 - 1/gamma) + se_slack.
//  * Each heavy point passes when its ratio lies within
//    [(1 - dl) / gamma, gamma (1 + du)]. By default dl, du are the
//    multiplicative Chernoff deviations at budget ln(200 h) over the h heavy
//    points, so an exact sampler fails with probability below 1%. When
//    ratio_sigmas > 0, dl = du = ratio_sigmas times the point's relative
//    standard error.
//  * An observed key with zero ideal mass inside the ideal's truncation
//    radius fails the report outright.
ClosenessReport closeness_check(const EmpiricalHistogram& hist, const ExactDistribution& ideal, long double gamma,
                                long double eps, long double ratio_sigmas = 0);

std::string report_json(const ClosenessReport& report);
std::string report_csv(const ClosenessReport& report);
std::string histogram_csv(const EmpiricalHistogram& hist);

// Pearson chi-square statistic and its upper-tail p-value against `expected`
// probabilities (which need not sum to one; the remainder is one cell).
struct ChiSquareResult {
  long double statistic = 0;
  std::size_t dof = 0;
  long double p_value = 1;
};
ChiSquareResult chi_square(const std::vector<std::uint64_t>& observed, const std::vector<long double>& expected,
                           std::uint64_t total);

}  // namespace dgslab

#endif  // DGSLAB_VERIFY_HPP_
