#pragma once

#include <stdexcept>
#include <string>

namespace orbitlab {

/// How a failure maps onto the CLI exit-code contract.
enum class ErrorCategory {
  Input,         // malformed or out-of-contract input (exit 3)
  Verification,  // a mathematical check or algorithm failed (exit 2)
};

class Error : public std::runtime_error {
 public:
  Error(const std::string& what, ErrorCategory category)
      : std::runtime_error(what), category_(category) {}
  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

#define ORBITLAB_DEFINE_ERROR(Name, Category)                 \
  class Name : public Error {                                 \
   public:                                                    \
    explicit Name(const std::string& what)                    \
        : Error(#Name ": " + what, ErrorCategory::Category) {} \
  };

ORBITLAB_DEFINE_ERROR(InputShapeError, Input)
ORBITLAB_DEFINE_ERROR(InputError, Input)
ORBITLAB_DEFINE_ERROR(PreconditionError, Input)
ORBITLAB_DEFINE_ERROR(DegenerateError, Input)
ORBITLAB_DEFINE_ERROR(StratumError, Input)
ORBITLAB_DEFINE_ERROR(ConditioningError, Input)
ORBITLAB_DEFINE_ERROR(NotRegularError, Verification)
ORBITLAB_DEFINE_ERROR(AlgorithmFailure, Verification)
ORBITLAB_DEFINE_ERROR(ClusteringError, Verification)
ORBITLAB_DEFINE_ERROR(IndeterminateError, Verification)

#undef ORBITLAB_DEFINE_ERROR

/// Parse or schema failure; `location` is "line N" or a JSON field path.
class FormatError : public Error {
 public:
  FormatError(const std::string& location, const std::string& what)
      : Error("FormatError at " + location + ": " + what, ErrorCategory::Input),
        location_(location) {}
  const std::string& location() const noexcept { return location_; }

 private:
  std::string location_;
};

/// Jacobi identity violated; carries the worst basis triple.
class JacobiError : public Error {
 public:
  JacobiError(int i, int j, int k, double residual)
      : Error("JacobiError: worst triple (" + std::to_string(i) + ", " + std::to_string(j) + ", " +
                  std::to_string(k) + ") residual " + std::to_string(residual),
              ErrorCategory::Input),
        i_(i), j_(j), k_(k), residual_(residual) {}
  int i() const noexcept { return i_; }
  int j() const noexcept { return j_; }
  int k() const noexcept { return k_; }
  double residual() const noexcept { return residual_; }

 private:
  int i_, j_, k_;
  double residual_;
};

/// A supplied Cartan involution failed one of its defining properties.
class CartanValidationError : public Error {
 public:
  CartanValidationError(const std::string& invariant, double residual)
      : Error("CartanValidationError: " + invariant + " (residual " + std::to_string(residual) + ")",
              ErrorCategory::Input),
        invariant_(invariant), residual_(residual) {}
  const std::string& invariant() const noexcept { return invariant_; }
  double residual() const noexcept { return residual_; }

 private:
  std::string invariant_;
  double residual_;
};

}  // namespace orbitlab
