#pragma once

#include <stdexcept>
#include <string>

namespace bomp {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A least-squares subproblem lost full column rank (or never had it).
class RankDeficient : public Error {
 public:
  using Error::Error;
};

/// A matrix column has (numerically) zero norm where a direction is required.
class ZeroColumn : public Error {
 public:
  using Error::Error;
};

class IndexOutOfRange : public Error {
 public:
  using Error::Error;
};

/// Two block-structured values disagree on (N, d, M).
class LayoutMismatch : public Error {
 public:
  using Error::Error;
};

class LengthMismatch : public Error {
 public:
  using Error::Error;
};

/// Every block is already in the forbidden set; no selection possible.
class AllForbidden : public Error {
 public:
  using Error::Error;
};

/// A signal's block support intersects a set it must be disjoint from.
class SupportOverlap : public Error {
 public:
  using Error::Error;
};

class ZeroSignal : public Error {
 public:
  using Error::Error;
};

/// Support enumeration would exceed the configured cap.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

class InvalidSpec : public Error {
 public:
  using Error::Error;
};

/// Pursuit step requested on a residual that is already below tolerance.
class ResidualAlreadyConverged : public Error {
 public:
  using Error::Error;
};

/// Config document is not syntactically valid JSON; message carries the position.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Config document is well-formed but a field is missing, unknown, or out of range.
class ValidationError : public Error {
 public:
  ValidationError(std::string field, const std::string& reason)
      : Error(field + ": " + reason), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// Matrix/signal file does not match the documented text format.
class FormatError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace bomp
