#ifndef DGSLAB_ERRORS_HPP_
#define DGSLAB_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace dgslab {

// Enumeration was asked to work above the configured dimension cap.
class DimensionCapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A rejection loop ran past its iteration cap.
class IterationCapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A hypothesis of a sampler or reduction does not hold for the given input.
class PreconditionViolated : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Exact integer arithmetic would leave the supported 128-bit range.
class ArithmeticRangeError : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

}  // namespace dgslab

#endif  // DGSLAB_ERRORS_HPP_
