// dgslab: sample, count, verify and plot-data on lattice files.
//
// Exit status: 0 ok, 1 verification failed, 2 bad arguments or input,
// 3 a sampler hit its iteration cap, 4 enumeration above the dimension cap.

#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "dgslab/acceptance.hpp"
#include "dgslab/counting.hpp"
#include "dgslab/errors.hpp"
#include "dgslab/exact_oracles.hpp"
#include "dgslab/general_norms.hpp"
#include "dgslab/lattice_io.hpp"
#include "dgslab/samplers.hpp"
#include "dgslab/verify.hpp"

using namespace dgslab;

namespace {

enum Exit { ok = 0, verify_failed = 1, bad_input = 2, timed_out = 3, dim_cap = 4 };

struct SampleArgs {
  std::string lattice, mode, s = "1", counting = "faithful", out = "-";
  std::uint64_t f = 10, n_samples = 0, seed = 0, cap_factor = 100000;
  double q = 1;
  bool fast_count = false;
};

void add_sample_flags(CLI::App* cmd, SampleArgs& a) {
  cmd->add_option("--lattice", a.lattice, "lattice JSON file")->required();
  cmd->add_option("--mode", a.mode, "dgs | cdgs | lq")->required()->check(CLI::IsMember({"dgs", "cdgs", "lq"}));
  cmd->add_option("--s", a.s, "width parameter as a rational (dgs, cdgs)");
  cmd->add_option("--f", a.f, "f: gamma = 1 + 1/f");
  cmd->add_option("--n-samples", a.n_samples, "number of samples")->required();
  cmd->add_option("--seed", a.seed, "RNG seed")->required();
  cmd->add_option("--q", a.q, "exponent of chi_q for --mode lq (1 or 2)");
  cmd->add_flag("--fast-count", a.fast_count, "exact ball counts instead of sparsification estimates");
  cmd->add_option("--counting", a.counting, "constants of the estimates")->check(CLI::IsMember({"faithful", "desk"}));
  cmd->add_option("--out", a.out, "output file, - for stdout");
  cmd->add_option("--iteration-cap-factor", a.cap_factor, "rejection loops give up after this many f^2 rounds");
}

CountingParams counting_params(const std::string& name) {
  return name == "desk" ? CountingParams::desk() : CountingParams::faithful();
}

struct Sampler {
  std::function<RationalVector(Rng&)> draw;
  std::function<ExactDistribution()> ideal;
};

Sampler make_sampler(const SampleArgs& a, const ShiftedLattice& lat, Rng& rng) {
  if (a.n_samples == 0) throw std::invalid_argument("--n-samples must be positive");
  const Rational s = parse_rational(a.s);
  if (s <= 0) throw std::invalid_argument("--s must be positive");
  SamplerConfig config;
  config.f = a.f;
  config.counts = a.fast_count ? CountMode::exact : CountMode::estimate;
  config.counting = counting_params(a.counting);
  config.iteration_cap_factor = a.cap_factor;
  if (a.mode == "dgs") {
    auto dgs = std::make_shared<DgsSampler>(lat, s, config, scan_oracle_factory(), rng);
    return {[dgs](Rng& g) { return dgs->sample(g); }, [lat, s] { return exact_dgs(lat, s); }};
  }
  if (a.mode == "cdgs") {
    if (!lat.shift.is_zero()) throw std::invalid_argument("--mode cdgs needs a lattice file without a shift");
    auto cdgs = std::make_shared<CdgsSampler>(lat.basis, s, config, scan_oracle_factory(), rng);
    return {[cdgs](Rng& g) { return cdgs->sample(g); }, [lat, s] { return exact_dgs(lat, s); }};
  }
  if (a.q != 1 && a.q != 2) throw std::invalid_argument("--q must be 1 or 2");
  const int q = static_cast<int>(a.q);
  ChiQConfig cc;
  cc.f = a.f;
  cc.counts = config.counts;
  cc.counting = config.counting;
  auto chi = std::make_shared<ChiQSampler>(lat, q, cc, rng);
  return {[chi](Rng& g) { return chi->sample(g); }, [lat, q] { return exact_chi_q(lat, q); }};
}

// Writes to the named file, or stdout for "-".
class Output {
 public:
  explicit Output(const std::string& path) {
    if (path != "-") {
      file_.open(path);
      if (!file_) throw ParseError("cannot write " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

int cmd_sample(const SampleArgs& a) {
  const ShiftedLattice lat = read_lattice_file(a.lattice);
  Rng rng(a.seed);
  Sampler sampler = make_sampler(a, lat, rng);
  Output out(a.out);
  for (std::uint64_t i = 0; i < a.n_samples; ++i) out.stream() << format_sample(sampler.draw(rng)) << "\n";
  return ok;
}

struct CountArgs {
  std::string lattice, radius, radius_sq, counting = "desk";
  std::uint64_t f = 10, seed = 0;
  bool primitive = false, exact = false;
};

int cmd_count(const CountArgs& a) {
  const ShiftedLattice lat = read_lattice_file(a.lattice);
  Rational key;
  if (!a.radius_sq.empty()) {
    key = parse_rational(a.radius_sq);
  } else {
    const Rational r = parse_rational(a.radius);
    key = r * r;
  }
  if (key < 0) throw std::invalid_argument("radius must be nonnegative");
  if (a.primitive && !lat.shift.is_zero()) throw std::invalid_argument("--primitive needs a lattice file without a shift");
  const long double gamma = 1 + 1.0L / static_cast<long double>(a.f);
  nlohmann::ordered_json doc;
  if (a.exact) {
    ExactCounter counter(lat, NormBody::l2(), key);
    doc["estimate"] = a.primitive ? counter.primitive_count(key) : counter.count(key);
    doc["lower_factor"] = 1;
    doc["method"] = "exact";
  } else {
    Rng rng(a.seed);
    auto oracle = make_scan_oracle(lat, NormBody::l2());
    const CountingParams params = counting_params(a.counting);
    const CountEstimate e = a.primitive
                                ? estimate_primitive_count(lat.basis, key, static_cast<long double>(a.f), *oracle, rng, params)
                                : estimate_count(lat, key, static_cast<long double>(a.f), *oracle, rng, params);
    doc["estimate"] = e.value;
    doc["lower_factor"] = static_cast<double>(std::pow(gamma, -0.1L));
    doc["method"] = "sparsification";
    doc["constants"] = params.name();
    doc["decisions"] = e.decisions;
    if (a.primitive) {
      doc["none_found"] = e.none_found;
      doc["degenerate"] = e.degenerate_flag;
    }
  }
  doc["radius_sq"] = to_string(key);
  doc["primitive"] = a.primitive;
  std::cout << doc.dump() << "\n";
  return ok;
}

struct VerifyArgs {
  std::string suite, report;
  std::uint64_t seed = 0, samples = 0;
  bool faithful = false, tamper = false;
};

int cmd_verify(const VerifyArgs& a) {
  const std::vector<int> ids = suite_criteria(a.suite);
  AcceptanceOptions options;
  options.seed = a.seed;
  options.samples = a.samples;
  options.faithful_counting = a.faithful;
  options.tamper = a.tamper;
  if (a.samples != 0 && a.samples < 1000) throw std::invalid_argument("--samples must be 0 or at least 1000");
  StructuralTally tally;
  nlohmann::ordered_json doc;
  doc["suite"] = a.suite;
  doc["seed"] = a.seed;
  doc["samples"] = a.samples;
  doc["criteria"] = nlohmann::ordered_json::array();
  bool all = true;
  for (int id : ids) {
    const CriterionResult r = run_criterion(id, options, tally);
    std::cout << criterion_line(r, false) << std::endl;
    all = all && r.pass;
    nlohmann::ordered_json entry;
    entry["id"] = r.id;
    entry["title"] = r.title;
    entry["pass"] = r.pass;
    entry["summary"] = r.summary;
    entry["report"] = r.report;
    doc["criteria"].push_back(entry);
  }
  doc["pass"] = all;
  if (!a.report.empty()) {
    Output out(a.report);
    out.stream() << doc.dump(2) << "\n";
  }
  return all ? ok : verify_failed;
}

struct PlotArgs {
  SampleArgs sample;
  std::string kind, max_radius_sq = "4";
  std::uint64_t steps = 40;
};

int cmd_plot(const PlotArgs& a) {
  const ShiftedLattice lat = read_lattice_file(a.sample.lattice);
  Output out(a.sample.out);
  if (a.kind == "counts") {
    const Rational top = parse_rational(a.max_radius_sq);
    if (top <= 0 || a.steps == 0) throw std::invalid_argument("--max-radius-sq and --steps must be positive");
    ExactCounter counter(lat, NormBody::l2(), top);
    out.stream() << "radius_sq,count" << (lat.shift.is_zero() ? ",primitive_pairs" : "") << "\n";
    for (std::uint64_t i = 1; i <= a.steps; ++i) {
      const Rational r = top * frac(static_cast<long>(i), static_cast<long>(a.steps));
      out.stream() << to_string(r) << "," << counter.count(r);
      if (lat.shift.is_zero()) out.stream() << "," << counter.primitive_count(r);
      out.stream() << "\n";
    }
    return ok;
  }
  Rng rng(a.sample.seed);
  Sampler sampler = make_sampler(a.sample, lat, rng);
  EmpiricalHistogram hist;
  for (std::uint64_t i = 0; i < a.sample.n_samples; ++i) hist.add(sampler.draw(rng));
  const ExactDistribution ideal = sampler.ideal();
  out.stream() << "point,count,frequency,ideal\n";
  for (const auto& [key, count] : hist.counts)
    out.stream() << '"' << key << "\"," << count << "," << static_cast<double>(count) / static_cast<double>(hist.total) << ","
                 << static_cast<double>(ideal.probability_of_key(key)) << "\n";
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete Gaussian sampling from CVP/SVP oracles by lattice sparsification"};
  app.require_subcommand(1);

  SampleArgs sample;
  auto* sample_cmd = app.add_subcommand("sample", "write samples, one comma-separated rational vector per line");
  add_sample_flags(sample_cmd, sample);

  CountArgs count;
  auto* count_cmd = app.add_subcommand("count", "estimate the number of lattice points in a ball");
  count_cmd->add_option("--lattice", count.lattice, "lattice JSON file")->required();
  auto* radius = count_cmd->add_option("--radius", count.radius, "radius as a rational");
  auto* radius_sq = count_cmd->add_option("--radius-sq", count.radius_sq, "squared radius as a rational");
  radius->excludes(radius_sq);
  count_cmd->add_option("--f", count.f, "f: gamma = 1 + 1/f");
  count_cmd->add_flag("--primitive", count.primitive, "count primitive +- pairs");
  count_cmd->add_option("--seed", count.seed, "RNG seed")->required();
  count_cmd->add_flag("--exact", count.exact, "exact count by enumeration");
  count_cmd->add_option("--counting", count.counting, "constants of the estimate")->check(CLI::IsMember({"faithful", "desk"}));

  VerifyArgs verify;
  auto* verify_cmd = app.add_subcommand("verify", "run an acceptance suite");
  verify_cmd->add_option("--suite", verify.suite, "sparsifier | dgs | cdgs | lq | counting | reductions | all")->required();
  verify_cmd->add_option("--seed", verify.seed, "RNG seed")->required();
  verify_cmd->add_option("--samples", verify.samples, "per-run sample count (0 = defaults)");
  verify_cmd->add_option("--report", verify.report, "JSON report file");
  verify_cmd->add_flag("--faithful", verify.faithful, "faithful counting constants in the counting suite");
  verify_cmd->add_flag("--tamper", verify.tamper, "compare the dgs suite against distorted exact tables");

  PlotArgs plot;
  auto* plot_cmd = app.add_subcommand("plot-data", "CSV of radius vs count, or point vs frequency");
  plot_cmd->add_option("--kind", plot.kind, "counts | frequencies")->required()->check(CLI::IsMember({"counts", "frequencies"}));
  plot_cmd->add_option("--lattice", plot.sample.lattice, "lattice JSON file")->required();
  plot_cmd->add_option("--max-radius-sq", plot.max_radius_sq, "counts: largest squared radius");
  plot_cmd->add_option("--steps", plot.steps, "counts: number of radii");
  plot_cmd->add_option("--mode", plot.sample.mode, "frequencies: dgs | cdgs | lq")->check(CLI::IsMember({"dgs", "cdgs", "lq"}));
  plot_cmd->add_option("--s", plot.sample.s, "frequencies: width parameter");
  plot_cmd->add_option("--f", plot.sample.f, "frequencies: f");
  plot_cmd->add_option("--n-samples", plot.sample.n_samples, "frequencies: number of samples");
  plot_cmd->add_option("--seed", plot.sample.seed, "frequencies: RNG seed");
  plot_cmd->add_option("--q", plot.sample.q, "frequencies: chi_q exponent");
  plot_cmd->add_flag("--fast-count", plot.sample.fast_count, "frequencies: exact ball counts");
  plot_cmd->add_option("--out", plot.sample.out, "output file, - for stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return bad_input;
  }

  try {
    if (*sample_cmd) return cmd_sample(sample);
    if (*count_cmd) {
      if (count.radius.empty() == count.radius_sq.empty()) throw std::invalid_argument("give exactly one of --radius, --radius-sq");
      return cmd_count(count);
    }
    if (*verify_cmd) return cmd_verify(verify);
    if (plot.kind == "frequencies" && (plot.sample.mode.empty() || plot.sample.n_samples == 0 || plot_cmd->count("--seed") == 0))
      throw std::invalid_argument("frequencies need --mode, --n-samples and --seed");
    return cmd_plot(plot);
  } catch (const IterationCapExceeded& e) {
    std::cerr << "dgslab: " << e.what() << "\n";
    return timed_out;
  } catch (const DimensionCapExceeded& e) {
    std::cerr << "dgslab: " << e.what() << "\n";
    return dim_cap;
  } catch (const std::exception& e) {
    std::cerr << "dgslab: " << e.what() << "\n";
    return bad_input;
  }
}
