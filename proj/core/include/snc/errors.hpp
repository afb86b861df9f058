#pragma once

#include <stdexcept>
#include <string>

namespace snc {

// Input outside the domain of a formula (p < 1, x <= 0, NaN, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Argument inside the domain but outside the range realizable by any input,
// e.g. an overlap value no orthonormal pair can produce.
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// A user-supplied object (pair file, vector) violates its invariants.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Two independently coded routes disagree beyond tolerance.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A ratio estimator whose denominator is statistically indistinguishable
// from zero.
class UnstableEstimateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Precondition on a collection of inputs (not a single value) failed.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace snc
