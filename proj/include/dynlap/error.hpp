#pragma once

#include <stdexcept>
#include <string>

namespace dynlap {

enum class ErrorKind {
  OutOfDomain,
  InvalidArgument,
  Dimension,
  GridTooCoarse,
  IntegrationConsistency,
  NumericalBlowup,
  Composition,
  Configuration,
  Convergence,
  ComplexSpectrum,
  DegenerateInput,
  DegenerateField,
  InvalidEigenvalue,
  UnderResolvedKernel,
  UnsupportedIsometry,
  Transport,
  Io,
  Parse,
  Render,
};

const char* to_string(ErrorKind kind);

// Single exception type for the library; `kind()` discriminates failure modes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace dynlap
