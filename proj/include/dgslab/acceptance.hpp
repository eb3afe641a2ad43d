#ifndef DGSLAB_ACCEPTANCE_HPP_
#define DGSLAB_ACCEPTANCE_HPP_

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "dgslab/lattice.hpp"
#include "dgslab/oracles.hpp"

namespace dgslab {

// The shipped lattice corpus (unshifted): Z1, Z2, Z3, figure1 = diag(3, 1/2),
// random3, rational2, skew2.
std::vector<ShiftedLattice> acceptance_corpus();
ShiftedLattice figure1_deep_hole();

struct AcceptanceOptions {
  std::uint64_t seed = 1;
  // Replaces the per-run sample count of the distributional criteria
  // (2, 4, 5, 6, 9, 10); 0 keeps the defaults.
  std::uint64_t samples = 0;
  // Criterion 3 with the faithful counting constants instead of the desk ones.
  bool faithful_counting = false;
  // Detection fixture: criterion 4 compares against a distorted exact table.
  bool tamper = false;
};

// Oracle calls and emitted samples seen by every criterion run so far;
// criterion 11 reads it.
struct StructuralTally {
  std::shared_ptr<OracleAudit> audit = std::make_shared<OracleAudit>();
  std::uint64_t handle_calls = 0;
  std::uint64_t foreign_handle_lattices = 0;
  std::uint64_t samples_checked = 0;
  std::uint64_t membership_failures = 0;
  std::vector<std::string> messages;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string summary;
  nlohmann::ordered_json report;
  double seconds = 0;
};

// Criteria of each verify suite; every suite ends with 11.
// Throws std::invalid_argument for an unknown suite.
std::vector<int> suite_criteria(const std::string& suite);
std::string criterion_title(int id);
CriterionResult run_criterion(int id, const AcceptanceOptions& options, StructuralTally& tally);
// "PASS  criterion k (title): summary", with the run time when asked.
std::string criterion_line(const CriterionResult& result, bool with_time = true);

}  // namespace dgslab

#endif  // DGSLAB_ACCEPTANCE_HPP_
