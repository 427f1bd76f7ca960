#pragma once

#include <stdexcept>
#include <string>

namespace ncspace {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed expression or configuration text.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Input that parses but violates a structural invariant (duplicate ids,
/// non-positive weights, mismatched dimensions, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Operands that do not live on the same object (groupoid, partition, space).
class MismatchError : public Error {
 public:
  using Error::Error;
};

/// Requested data is not carried by the operand (jets, gradients).
class MissingDataError : public Error {
 public:
  using Error::Error;
};

}  // namespace ncspace
