#pragma once

#include <stdexcept>
#include <string>

namespace mlgc {

// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Caller passed something that violates a documented precondition
// (bad shape, negative weight, k out of range, malformed file, ...).
class ArgumentError : public Error {
 public:
  explicit ArgumentError(const std::string& what) : Error(what) {}
};

// A numerical routine failed: eigensolver did not converge, a matrix that
// must be positive definite is not, exp would overflow, etc.
class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what) : Error(what) {}
};

// The Gram matrix of the network output stayed rank deficient even after
// jitter escalation.  Carries the smallest Gram eigenvalue for diagnostics.
class RankDeficiencyError : public NumericalError {
 public:
  RankDeficiencyError(const std::string& what, double smallest_eigenvalue)
      : NumericalError(what), smallest_eigenvalue_(smallest_eigenvalue) {}
  double smallest_eigenvalue() const { return smallest_eigenvalue_; }

 private:
  double smallest_eigenvalue_;
};

// Training diverged (non-finite loss or gradient).  Carries the step index.
class TrainingError : public Error {
 public:
  TrainingError(const std::string& what, int step) : Error(what), step_(step) {}
  int step() const { return step_; }

 private:
  int step_;
};

// Filesystem / parsing failure while reading or writing datasets and models.
class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(what) {}
};

}  // namespace mlgc
