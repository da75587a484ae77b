#pragma once

#include <stdexcept>
#include <string>

namespace ein {

// Violated operation precondition (bad dimension, non-unit vector, ...).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A point of the Einstein universe that lies on the lightcone of the
// chart's point at infinity, or in the opposite chart of the double cover.
class NotInChart : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

}  // namespace ein
