#pragma once

#include <stdexcept>
#include <string>

namespace coxlab {

inline constexpr const char* kVersion = "0.3.0";

/// Numeric tolerances shared by every module.
struct Tolerances {
  double algebraic = 1e-12;         // identities that hold to rounding error
  double constructed = 1e-9;        // identities of constructed objects
  double finite_difference = 1e-6;  // finite-difference comparisons
  double drift = 1e-10;             // renormalization trigger
  double dedup = 1e-8;              // group element identification
};

inline constexpr Tolerances kTol{};

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class DegenerateInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class OutsidePoint : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class PreconditionViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class SamplerError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SizeLimitError : public std::length_error {
 public:
  using std::length_error::length_error;
};

class NotInBall : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Raised when a numerical check contradicts a proven inequality.
class CounterexampleError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace coxlab
