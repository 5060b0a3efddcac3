#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bscount {

// Input matrix fails the symmetry tolerance.
class AsymmetryError : public std::invalid_argument {
 public:
  AsymmetryError(const std::string& what, double max_asymmetry)
      : std::invalid_argument(what), max_asymmetry_(max_asymmetry) {}
  double max_asymmetry() const noexcept { return max_asymmetry_; }

 private:
  double max_asymmetry_;
};

// Scalar function not finite on some eigenvalue.
class DomainError : public std::domain_error {
 public:
  DomainError(const std::string& what, double eigenvalue)
      : std::domain_error(what), eigenvalue_(eigenvalue) {}
  double eigenvalue() const noexcept { return eigenvalue_; }

 private:
  double eigenvalue_;
};

class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, long iterations)
      : std::runtime_error(what), iterations_(iterations) {}
  long iterations() const noexcept { return iterations_; }

 private:
  long iterations_;
};

// An eigenvalue sits inside the guard band of a counting threshold.
class ThresholdCollision : public std::runtime_error {
 public:
  ThresholdCollision(const std::string& what, double eigenvalue)
      : std::runtime_error(what), eigenvalue_(eigenvalue) {}
  double eigenvalue() const noexcept { return eigenvalue_; }

 private:
  double eigenvalue_;
};

// A stated precondition of an operation does not hold.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The coupling family never develops a negative eigenvalue.
class NeverBindsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A post-condition that the construction guarantees was violated.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace bscount
