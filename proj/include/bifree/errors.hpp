#pragma once

#include <stdexcept>
#include <string>

namespace bifree {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (mismatched sizes, unknown
/// symbol, non-pairing input, ...).
struct ArgumentError : Error {
  using Error::Error;
};

/// An enumeration was requested beyond the hard size cap.
struct SizeLimitError : Error {
  using Error::Error;
};

/// A moment or cumulant oracle was queried outside its table.
struct OracleGapError : Error {
  using Error::Error;
};

/// A matrix that must be positive semidefinite has an eigenvalue below
/// the accepted clamp threshold.
struct NotPsdError : Error {
  using Error::Error;
};

/// A configuration field failed validation; `field` names the offender.
struct ValidationError : Error {
  std::string field;
  ValidationError(std::string field_, const std::string& what_)
      : Error(what_), field(std::move(field_)) {}
};

/// Input text could not be parsed.
struct ParseError : Error {
  using Error::Error;
};

}  // namespace bifree
