#ifndef INTERDICT_ERRORS_HPP
#define INTERDICT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace interdict {

/// Malformed input file (bad syntax, unknown key, wrong type).
class ParseError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Well-formed input that violates a model invariant.
class ValidationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Solver could not produce a trustworthy answer (iteration limit, singular basis, ...).
class SolverError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A big-M MILP solution touched its M bound even after the allowed retries.
class BigMInvalidError : public SolverError {
public:
  using SolverError::SolverError;
};

class DimensionError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace interdict

#endif
