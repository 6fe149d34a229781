#pragma once

#include <stdexcept>
#include <string>

namespace rvpp {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed instance document: wrong type, missing key, wrong series length.
class SchemaError : public Error {
 public:
  using Error::Error;
};

// Well-formed data that breaks a domain invariant (e.g. lower > upper).
class InvariantError : public Error {
 public:
  using Error::Error;
};

// Data that makes a model infeasible by construction, detected before solving.
class BuildError : public Error {
 public:
  using Error::Error;
};

class SolverError : public Error {
 public:
  using Error::Error;
};

class EnumerationLimitError : public Error {
 public:
  using Error::Error;
};

}  // namespace rvpp
