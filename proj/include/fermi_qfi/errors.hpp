#pragma once

#include <stdexcept>
#include <string>

namespace fqfi {

/// A requested size exceeds what the dense/full-Fock routines are allowed to allocate.
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// An argument violates a precondition (index range, normalization, symmetry, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A computation produced a value that signals an inconsistent input
/// (e.g. a large imaginary residue from a non-Hermitian operator).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The principal matrix logarithm is undefined (eigenvalue on the branch cut).
class BranchCutError : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace fqfi
