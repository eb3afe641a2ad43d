#ifndef DGSLAB_LATTICE_IO_HPP_
#define DGSLAB_LATTICE_IO_HPP_

#include <stdexcept>
#include <string>

#include "dgslab/lattice.hpp"

namespace dgslab {

// Malformed lattice file or sample line.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// {"dimension": n, "basis": [[...], ...], "shift": [...], "name": "..."}.
// Each inner basis array is one basis vector; entries are "p/q" strings
// (integers are also accepted). "shift" is optional.
ShiftedLattice parse_lattice_json(const std::string& text);
ShiftedLattice read_lattice_file(const std::string& path);
std::string lattice_json(const ShiftedLattice& lat);

// One sample per line: comma-separated "p/q" coordinates.
std::string format_sample(const RationalVector& x);
RationalVector parse_sample(const std::string& line);

}  // namespace dgslab

#endif  // DGSLAB_LATTICE_IO_HPP_
