#pragma once

#include <stdexcept>

namespace embedlab {

// Shapes do not match what the operation requires.
struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Input data fails a documented validation rule (bad column sum, negative
// entry beyond tolerance, malformed map, ...). The message names the culprit.
struct ValidationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A runtime precondition that correct callers never break was broken
// (non-Hermitian input to a Hermitian routine, non-extreme matrix to the
// extreme classifier, ...).
struct ContractViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Parameter lies outside the mathematical domain of the operation.
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// Request exceeds a hard size guard and would not finish in reasonable
// time or memory.
struct ResourceGuardError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace embedlab
