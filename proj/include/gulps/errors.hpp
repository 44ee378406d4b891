#pragma once

#include <stdexcept>
#include <string>

namespace gulps {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// eig4 did not settle within its iteration budget.
class ConvergenceFailure : public Error {
 public:
  using Error::Error;
};

/// KAK could not extract a real eigenbasis even after perturbed retries.
class NumericalDegeneracy : public Error {
 public:
  using Error::Error;
};

/// partitions_in_box called with r + k != 4.
class InvalidBox : public Error {
 public:
  using Error::Error;
};

/// Simplex exceeded 50 × (rows + vars) pivots.
class IterationLimit : public Error {
 public:
  using Error::Error;
};

/// Every restart of a segment solve failed to reach the residual threshold.
class SegmentNoConvergence : public Error {
 public:
  SegmentNoConvergence(const std::string& what, double best_residual)
      : Error(what), best_residual_(best_residual) {}
  double best_residual() const { return best_residual_; }

 private:
  double best_residual_;
};

/// Multiplying out an assembled decomposition missed the target.
class AssemblyMismatch : public Error {
 public:
  AssemblyMismatch(const std::string& what, double distance) : Error(what), distance_(distance) {}
  double distance() const { return distance_; }

 private:
  double distance_;
};

/// decompose ran out of sentences or cost budget without a feasible one.
class BudgetExhausted : public Error {
 public:
  using Error::Error;
};

/// Malformed user input (files, names, flags).
class InputError : public Error {
 public:
  using Error::Error;
};

}  // namespace gulps
