#pragma once

#include <stdexcept>
#include <string>

namespace spherehit {

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Result not representable in double precision.
class OverflowError : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

// Base for numerical procedures that ran but missed their accuracy target.
class NumericalFailure : public std::runtime_error {
 public:
  NumericalFailure(const std::string& what, double achieved)
      : std::runtime_error(what), achieved_(achieved) {}

  // Error actually reached when the procedure gave up.
  double achieved() const noexcept { return achieved_; }

 private:
  double achieved_;
};

class TruncationError : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

class InversionError : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

class QuadratureError : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

// |x| == r: the hitting time is identically zero and has no density.
class DegenerateGeometry : public DomainError {
 public:
  using DomainError::DomainError;
};

}  // namespace spherehit
