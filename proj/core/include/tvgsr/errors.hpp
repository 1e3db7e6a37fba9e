#pragma once

#include <stdexcept>
#include <string>

namespace tvgsr {

/// Base class for all library errors.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A precondition on an argument was violated (bad k, empty edge set, shape
/// mismatch, non-positive lambda, ...).
struct InvalidParameter : Error {
  using Error::Error;
};

/// All edge distances are zero, so the Gaussian kernel bandwidth degenerates.
struct DegenerateKernel : Error {
  using Error::Error;
};

/// (L + eps*I)^beta is singular or undefined (eps = 0 with beta < 0).
struct SingularOperator : Error {
  using Error::Error;
};

/// Requested mode is not available (e.g. fractional beta above the dense cap).
struct UnsupportedConfiguration : Error {
  using Error::Error;
};

/// A computation produced NaN/Inf or an invariant check failed numerically.
struct NumericalFailure : Error {
  using Error::Error;
};

/// Iterative eigenvalue estimation did not reach the requested accuracy.
/// Carries the best estimate obtained before giving up.
struct EstimationFailed : Error {
  EstimationFailed(const std::string& msg, double best)
      : Error(msg), best_estimate(best) {}
  double best_estimate;
};

/// Malformed input file. `line` is 1-based; `column` is 0 when not applicable.
struct ParseError : Error {
  ParseError(const std::string& msg, std::size_t line_no, std::size_t column_no = 0)
      : Error(msg + " (line " + std::to_string(line_no) +
              (column_no ? ", column " + std::to_string(column_no) : "") + ")"),
        line(line_no),
        column(column_no) {}
  std::size_t line;
  std::size_t column;
};

}  // namespace tvgsr
