#pragma once

#include <stdexcept>
#include <string>
#include <utility>

#include "col/types.hpp"

namespace col {

// Base class for everything thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid inputs: wrong dimensions, points outside the decision set, bad arguments.
struct DomainError : Error {
  using Error::Error;
};

// Experiment configuration problems. CLI exit code 2.
struct ConfigError : Error {
  using Error::Error;
};

// Numeric failures: non-finite values, underflow, undefined rates. CLI exit code 3.
struct NumericError : Error {
  using Error::Error;
};

// Requested operation not available for this problem (e.g. FTL without a leader oracle).
struct UnsupportedError : Error {
  using Error::Error;
};

// Violated internal contract (e.g. an algorithm step leaving the decision set).
struct InternalError : Error {
  using Error::Error;
};

// Iterative solver ran out of iterations; carries the best iterate seen.
struct NonConvergenceError : NumericError {
  NonConvergenceError(const std::string& what, Vec best_iterate, double best_residual,
                      long iteration_count)
      : NumericError(what),
        best(std::move(best_iterate)),
        residual(best_residual),
        iterations(iteration_count) {}

  Vec best;
  double residual;
  long iterations;
};

}  // namespace col
