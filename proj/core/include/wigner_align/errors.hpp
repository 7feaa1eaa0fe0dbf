#pragma once

#include <stdexcept>
#include <string>

namespace wigner_align {

// Operand sizes disagree (two permutations of different n, a matrix of the
// wrong order, mismatched vector sets).
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A scalar argument is outside its documented domain.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An enumeration would exceed its permutation budget.
class EnumerationTooLarge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The input is well-formed but the quantity is undefined for it
// (zero variance, infinite inverse temperature).
class DegenerateInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numerical kernel (eigensolver, assignment solver) failed.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed serialized data.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace wigner_align
