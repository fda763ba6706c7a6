#pragma once

#include <stdexcept>
#include <string>

namespace tmm {

/// Input that violates a structural requirement (shape, Hermitian symmetry,
/// dimension mismatch, malformed file).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A function was evaluated outside its domain. Carries the offending point.
class DomainError : public std::domain_error {
 public:
  DomainError(const std::string& what, double point)
      : std::domain_error(what), point_(point) {}
  double point() const noexcept { return point_; }

 private:
  double point_;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A moment sequence whose Hankel matrix is indefinite beyond tolerance.
class NotAMomentSequence : public std::runtime_error {
 public:
  NotAMomentSequence(const std::string& what, int failing_index, double pivot)
      : std::runtime_error(what), failing_index_(failing_index), pivot_(pivot) {}
  int failing_index() const noexcept { return failing_index_; }
  double pivot() const noexcept { return pivot_; }

 private:
  int failing_index_;
  double pivot_;
};

}  // namespace tmm
