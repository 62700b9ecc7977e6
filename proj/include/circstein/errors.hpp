#pragma once

#include <stdexcept>
#include <string>

namespace circstein {

// Base of every error the library throws. The C API maps each subclass onto a
// status code; the CLI maps status codes onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside an operation's domain (non-finite angle, x > 700 for I0, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// A numerical routine failed: non-finite integrand, series cap exceeded,
// division guard tripped.
class NumericError : public Error {
 public:
  using Error::Error;
};

// Caller broke a precondition that is not a simple range check
// (uncentred test function, zero resultant data, ...).
class ContractError : public Error {
 public:
  using Error::Error;
};

// Invalid distribution parameters or unknown names. Raised before any
// computation happens.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace circstein
