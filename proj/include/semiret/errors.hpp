#pragma once

#include <stdexcept>
#include <string>

namespace semiret {

// Every failure surfaced by the library derives from Error so callers (the CLI
// in particular) can report it uniformly.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller handed in something that violates an operation's precondition.
class InputError : public Error {
 public:
  using Error::Error;
};

// Inconsistent models, shapes or options.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Numerical failure during optimisation (non-finite loss or gradient).
class TrainingError : public Error {
 public:
  using Error::Error;
};

// A metric was asked for on data where it is undefined.
class MetricError : public Error {
 public:
  using Error::Error;
};

class LookupError : public Error {
 public:
  using Error::Error;
};

// Broken internal invariant; indicates a bug rather than bad input.
class InternalError : public Error {
 public:
  using Error::Error;
};

// File format problems; carries the offending line when known.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace semiret
