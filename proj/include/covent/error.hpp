#pragma once

#include <stdexcept>
#include <string>

namespace covent {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands with incompatible shapes or bipartitions.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Input that violates a documented invariant (symmetry, trace, ranges, parse errors).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Hermiticity check failed; carries the relative Frobenius defect that tripped it.
class NotHermitianError : public ValidationError {
 public:
  NotHermitianError(double defect, double tolerance)
      : ValidationError("matrix is not Hermitian: relative defect " + std::to_string(defect) +
                        " exceeds tolerance " + std::to_string(tolerance)),
        defect_(defect) {}

  double defect() const noexcept { return defect_; }

 private:
  double defect_;
};

/// A numerical routine did not produce a usable result.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace covent
