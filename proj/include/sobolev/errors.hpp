#pragma once

#include <stdexcept>
#include <string>

namespace sobolev {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside an operation's domain (empty interval, non-positive step, ...).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// Potential cannot be handled, e.g. a tail value with no decaying solution.
class InvalidPotential : public Error {
 public:
  using Error::Error;
};

/// Threshold split would put a constant tail into the L1 part.
class NonIntegrableExcess : public Error {
 public:
  using Error::Error;
};

/// Grid does not carry a node required by the potential.
class AssemblyContractViolation : public Error {
 public:
  using Error::Error;
};

/// A solver's applicability conditions failed; the caller should fall back.
class MethodInapplicable : public Error {
 public:
  using Error::Error;
};

/// Every evaluation in a run exhausted its iteration budget.
class NonConvergence : public Error {
 public:
  using Error::Error;
};

/// m(V) <= 0: no Sobolev-type inequality, hence no best constant.
class NoInequality : public Error {
 public:
  using Error::Error;
};

/// Malformed or inconsistent run configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace sobolev
