#pragma once

#include <stdexcept>
#include <string>

namespace msi {

/// Base class for all domain errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// |T_msi| too small for the dissipative coupling to be defined.
class DegenerateOperatingPoint : public Error {
 public:
  using Error::Error;
};

/// Requested MSI transmission is unreachable at this (r_m, epsilon).
class Unsolvable : public Error {
 public:
  using Error::Error;
};

/// Imbalance beyond epsilon_max: cos 2kx0 would be imaginary.
class ImaginaryEta : public Unsolvable {
 public:
  using Unsolvable::Unsolvable;
};

/// Optical spring drives omega_M^2 or kappa_M non-positive.
class UnstableSpring : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(int line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

class UnitError : public Error {
 public:
  using Error::Error;
};

class VerificationFailed : public Error {
 public:
  using Error::Error;
};

}  // namespace msi
