#pragma once

#include <stdexcept>
#include <string>

namespace tunnel {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A documented precondition of an operation was violated.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A file could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Malformed stack or scenario file.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

/// Phase (and hence any phase-derivative time) is undefined, e.g. |t| at a true zero.
class UnreliableDelay : public Error {
 public:
  using Error::Error;
};

/// The probe lies outside a stop band where the semiclassical velocity is defined.
class OutsideStopBand : public Error {
 public:
  using Error::Error;
};

/// Coincidence scan whose filters block the whole band.
class DegenerateScan : public Error {
 public:
  using Error::Error;
};

/// Time-domain grid violates the Courant or resolution bound.
class GridError : public Error {
 public:
  using Error::Error;
};

/// Time-domain record with no single dominant envelope peak.
class DistortedRecord : public Error {
 public:
  using Error::Error;
};

}  // namespace tunnel
