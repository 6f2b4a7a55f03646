#pragma once

#include <stdexcept>
#include <string>

namespace covadmm {

// Bad arguments: shapes, ranges, non-finite data, malformed files.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Numerical failure inside an iterative method.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The test-scale reference solver hit its iteration cap.
class OracleFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace covadmm
