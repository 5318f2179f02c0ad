#pragma once

#include <stdexcept>
#include <string>

namespace dflab {

// Invalid run configuration (bad file, unknown key, inconsistent sizes).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Mathematical domain violation (square root of a nonpositive constant,
// parameter outside the admissible range of a closed form).
struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// An eigenvalue of a mean-field operator fell inside the spectral-gap
// guard band; projectors P+/P- are ill-defined there.
struct GapCollapseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A cross-gap eigenvalue pair degenerated; the projector derivative's
// divided-difference formula is singular at such a point.
struct DegeneratePairError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An iterative procedure hit its iteration cap above tolerance.
struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace dflab
