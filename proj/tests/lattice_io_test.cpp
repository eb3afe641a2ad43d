#include "dgslab/lattice_io.hpp"

#include <gtest/gtest.h>

#include "dgslab/acceptance.hpp"
#include "test_support.hpp"

namespace dgslab {
namespace {

using testing::vec;

TEST(LatticeJson, ParsesBasisVectorsAndShift) {
  const ShiftedLattice lat = parse_lattice_json(
      R"({"name": "f", "dimension": 2, "basis": [["3", "0"], ["0", "1/2"]], "shift": ["3/2", "1/4"]})");
  EXPECT_EQ(lat.name, "f");
  EXPECT_EQ(lat.basis, testing::figure1_basis());
  EXPECT_EQ(lat.shift, vec({"3/2", "1/4"}));
}

TEST(LatticeJson, ShiftDefaultsToZeroAndIntegersAreAccepted) {
  const ShiftedLattice lat = parse_lattice_json(R"({"basis": [[1, 0], [7, 1]]})");
  EXPECT_TRUE(lat.shift.is_zero());
  EXPECT_EQ(lat.basis.column(1), testing::ivec({7, 1}));
}

TEST(LatticeJson, RoundTrip) {
  const ShiftedLattice a(testing::rational2_basis(), vec({"-2/7", "5"}), "r2");
  const ShiftedLattice b = parse_lattice_json(lattice_json(a));
  EXPECT_EQ(b.basis, a.basis);
  EXPECT_EQ(b.shift, a.shift);
  EXPECT_EQ(b.name, "r2");
  EXPECT_EQ(lattice_json(b), lattice_json(a));
}

TEST(LatticeJson, Rejections) {
  EXPECT_THROW(parse_lattice_json("not json"), ParseError);
  EXPECT_THROW(parse_lattice_json(R"([1, 2])"), ParseError);
  EXPECT_THROW(parse_lattice_json(R"({"dimension": 2})"), ParseError);
  EXPECT_THROW(parse_lattice_json(R"({"basis": [["1", "0"], ["0"]]})"), ParseError);
  EXPECT_THROW(parse_lattice_json(R"({"basis": [["1", "0"], ["2", "0"]]})"), ParseError);  // singular
  EXPECT_THROW(parse_lattice_json(R"({"dimension": 3, "basis": [["1", "0"], ["0", "1"]]})"), ParseError);
  EXPECT_THROW(parse_lattice_json(R"({"basis": [["1", "0"], ["0", "1"]], "shift": ["1"]})"), ParseError);
  EXPECT_THROW(parse_lattice_json(R"({"basis": [["1", "0"], ["0", "x/2"]]})"), ParseError);
  EXPECT_THROW(parse_lattice_json(R"({"basis": [["1", "0"], ["0", 0.5]]})"), ParseError);
  EXPECT_THROW(read_lattice_file("/nonexistent/lattice.json"), ParseError);
}

TEST(SampleLines, RoundTrip) {
  const RationalVector x = vec({"-3/2", "0", "7/4"});
  EXPECT_EQ(format_sample(x), "-3/2,0,7/4");
  EXPECT_EQ(parse_sample(format_sample(x)), x);
  EXPECT_THROW(parse_sample("1,,2"), ParseError);
}

TEST(ShippedCorpus, FilesMatchTheBuiltInCorpus) {
  const std::map<std::string, std::string> files = {{"Z1", "z1.json"},         {"Z2", "z2.json"},
                                                    {"Z3", "z3.json"},         {"figure1", "figure1_centered.json"},
                                                    {"random3", "random3.json"}, {"rational2", "rational2.json"},
                                                    {"skew2", "skew2.json"}};
  for (const auto& lat : acceptance_corpus()) {
    const ShiftedLattice file = read_lattice_file(std::string(DGSLAB_DATA) + "/" + files.at(lat.name));
    EXPECT_EQ(file.basis, lat.basis) << lat.name;
    EXPECT_TRUE(file.shift.is_zero()) << lat.name;
    EXPECT_EQ(file.name, lat.name);
  }
  const ShiftedLattice hole = read_lattice_file(std::string(DGSLAB_DATA) + "/figure1.json");
  EXPECT_EQ(hole.basis, figure1_deep_hole().basis);
  EXPECT_EQ(hole.shift, figure1_deep_hole().shift);
}

}  // namespace
}  // namespace dgslab
