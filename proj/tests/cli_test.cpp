// Runs the dgslab binary as a subprocess.

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dgslab/lattice_io.hpp"

namespace dgslab {
namespace {

struct CliRun {
  int status = -1;
  std::string out;
};

CliRun run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + DGSLAB_CLI + " " + args + " 2>/dev/null";
  CliRun r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf;
  std::size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::string data(const std::string& name) { return std::string(DGSLAB_DATA) + "/" + name; }

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) out.push_back(line);
  return out;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST(CliSample, CenteredZ2IsIntegerAndDeterministic) {
  const std::string args = "sample --lattice " + data("z2.json") +
                           " --mode cdgs --s 1 --f 10 --n-samples 1000 --seed 7 --fast-count --out ";
  const std::string a = ::testing::TempDir() + "/cdgs_a.txt", b = ::testing::TempDir() + "/cdgs_b.txt";
  ASSERT_EQ(run(args + a).status, 0);
  ASSERT_EQ(run(args + b).status, 0);
  const std::string text = slurp(a);
  EXPECT_EQ(text, slurp(b));
  const auto lines = lines_of(text);
  ASSERT_EQ(lines.size(), 1000u);
  const ShiftedLattice lat = read_lattice_file(data("z2.json"));
  for (const auto& line : lines) {
    const RationalVector x = parse_sample(line);
    ASSERT_EQ(x.dimension(), 2u);
    ASSERT_TRUE(is_lattice_member(lat.basis, x)) << line;
  }
}

TEST(CliSample, DeepHoleLinesAreMembersOfTheShiftedLattice) {
  const CliRun r = run("sample --lattice " + data("figure1.json") + " --mode dgs --s 5 --f 10 --n-samples 500 --seed 3 --fast-count");
  ASSERT_EQ(r.status, 0);
  const ShiftedLattice lat = read_lattice_file(data("figure1.json"));
  const auto lines = lines_of(r.out);
  ASSERT_EQ(lines.size(), 500u);
  for (const auto& line : lines) ASSERT_TRUE(is_lattice_member(lat.basis, parse_sample(line) + lat.shift)) << line;
}

TEST(CliSample, DeepHoleHistogramPeaksAtFourPoints) {
  const CliRun r = run("plot-data --kind frequencies --lattice " + data("figure1.json") +
                    " --mode dgs --s 5 --f 10 --n-samples 40000 --seed 11 --fast-count");
  ASSERT_EQ(r.status, 0);
  auto lines = lines_of(r.out);
  ASSERT_GT(lines.size(), 5u);
  EXPECT_EQ(lines[0], "point,count,frequency,ideal");
  std::vector<std::pair<long, std::string>> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto close = lines[i].find("\",");
    const std::string key = lines[i].substr(1, close - 1);
    rows.emplace_back(std::stol(lines[i].substr(close + 2)), key);
  }
  std::sort(rows.rbegin(), rows.rend());
  std::vector<std::string> top;
  for (int i = 0; i < 4; ++i) top.push_back(rows[i].second);
  std::sort(top.begin(), top.end());
  EXPECT_EQ(top, (std::vector<std::string>{"-3/2,-1/4", "-3/2,1/4", "3/2,-1/4", "3/2,1/4"}));
}

TEST(CliSample, ChiOneOnZ2) {
  const CliRun r = run("sample --lattice " + data("z2.json") + " --mode lq --q 1 --f 2 --n-samples 200 --seed 1 --fast-count");
  ASSERT_EQ(r.status, 0);
  EXPECT_EQ(lines_of(r.out).size(), 200u);
}

TEST(CliCount, ExactExamples) {
  auto estimate = [](const CliRun& r) { return nlohmann::json::parse(r.out)["estimate"].get<int>(); };
  const CliRun a = run("count --lattice " + data("z2.json") + " --radius 1 --seed 1 --exact");
  ASSERT_EQ(a.status, 0);
  EXPECT_EQ(estimate(a), 5);
  EXPECT_EQ(nlohmann::json::parse(a.out)["method"], "exact");
  EXPECT_EQ(estimate(run("count --lattice " + data("z2.json") + " --radius-sq 2 --seed 1 --exact")), 9);
  EXPECT_EQ(estimate(run("count --lattice " + data("z2.json") + " --radius-sq 2 --seed 1 --exact --primitive")), 4);
}

TEST(CliCount, SparsificationEstimate) {
  const CliRun r = run("count --lattice " + data("z2.json") + " --radius-sq 2 --f 2 --seed 1");
  ASSERT_EQ(r.status, 0);
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["method"], "sparsification");
  const double lower = doc["lower_factor"].get<double>();
  EXPECT_NEAR(lower, std::pow(1.5, -0.1), 1e-12);
  const double est = doc["estimate"].get<double>();
  EXPECT_GE(est, 9 * lower);
  EXPECT_LE(est, 9 / lower);
}

TEST(CliVerify, SparsifierSuitePassesAndReports) {
  const std::string report = ::testing::TempDir() + "/sparsifier.json";
  const CliRun r = run("verify --suite sparsifier --seed 1 --samples 20000 --report " + report);
  EXPECT_EQ(r.status, 0) << r.out;
  const auto doc = nlohmann::json::parse(slurp(report));
  EXPECT_TRUE(doc["pass"].get<bool>());
  const auto& rows = doc["criteria"][0]["report"]["rows"];
  ASSERT_FALSE(rows.empty());
  EXPECT_TRUE(rows[0].contains("lower"));
  EXPECT_TRUE(rows[0].contains("probability"));
  EXPECT_EQ(run("verify --suite sparsifier --seed 1 --samples 20000").out, r.out);
}

TEST(CliVerify, TamperedTablesFail) {
  const CliRun r = run("verify --suite dgs --seed 1 --samples 5000 --tamper");
  EXPECT_EQ(r.status, 1) << r.out;
  EXPECT_NE(r.out.find("FAIL  criterion 4"), std::string::npos);
}

TEST(CliExitCodes, ParseAndConfigErrors) {
  EXPECT_EQ(run("sample --lattice " + data("z2.json") + " --mode dgs --n-samples 3").status, 2);  // no seed
  EXPECT_EQ(run("sample --lattice /nonexistent.json --mode dgs --n-samples 3 --seed 1").status, 2);
  EXPECT_EQ(run("sample --lattice " + data("z2.json") + " --mode dgs --s 1/0 --n-samples 3 --seed 1").status, 2);
  EXPECT_EQ(run("sample --lattice " + data("figure1.json") + " --mode cdgs --n-samples 3 --seed 1").status, 2);
  EXPECT_EQ(run("count --lattice " + data("z2.json") + " --seed 1").status, 2);
  EXPECT_EQ(run("verify --suite nope --seed 1").status, 2);
  EXPECT_EQ(run("frobnicate").status, 2);
}

TEST(CliExitCodes, DimensionCapAndTimeout) {
  EXPECT_EQ(run("count --lattice " + data("z3.json") + " --radius 1 --seed 1 --exact", "DGSLAB_DIM_CAP=2").status, 4);
  EXPECT_EQ(run("sample --lattice " + data("z2.json") +
                " --mode dgs --s 1 --f 10 --n-samples 2000 --seed 1 --fast-count --iteration-cap-factor 1")
                .status,
            3);
}

}  // namespace
}  // namespace dgslab
