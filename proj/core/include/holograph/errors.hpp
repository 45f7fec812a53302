#pragma once

#include <stdexcept>
#include <string>

namespace holograph {

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct InvalidDimension : Error {
  using Error::Error;
};
struct InvalidContext : Error {
  using Error::Error;
};
struct InvalidNesting : Error {
  using Error::Error;
};
// Spectral radius of the hidden block is >= 1, so the Neumann series behind
// the absorption matrix diverges.
struct NonConvergentHiddenBlock : Error {
  using Error::Error;
};
struct IncompatibleSections : Error {
  using Error::Error;
};
struct DanglingBelief : Error {
  using Error::Error;
};
struct NonFiniteGradient : Error {
  using Error::Error;
};
struct BudgetExhausted : Error {
  using Error::Error;
};
struct OracleUnavailable : Error {
  using Error::Error;
};
struct InvalidComparison : Error {
  using Error::Error;
};
struct FormatError : Error {
  using Error::Error;
};
struct IoError : Error {
  using Error::Error;
};

}  // namespace holograph
