#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lpdo {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dimension mismatch, invalid parameter, or evaluation outside a finite domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The torus grid is too coarse to resolve the requested lattice window.
class AliasingError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Malformed symbol expression or input file. `position` is a 0-based offset
/// into the offending text when one is known.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t position = npos)
      : Error(position == npos ? message
                               : message + " (at position " + std::to_string(position) + ")"),
        position_(position) {}

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// A numerical precondition of an operation does not hold (e.g. ellipticity).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// An iterative method did not reach its tolerance.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace lpdo
