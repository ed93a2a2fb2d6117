#pragma once

#include <stdexcept>
#include <string>

namespace gpca {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input (bad shapes, parse failures, schema errors).
class InputError : public Error {
 public:
  using Error::Error;
};

/// Numerically degenerate data, e.g. an all-zero spectrum.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

/// Failure while fitting vanishing polynomials or recovering a subspace model.
class FitError : public Error {
 public:
  FitError(std::string stage, const std::string& what)
      : Error(stage + ": " + what), stage_(std::move(stage)) {}
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

/// Polynomial division / peeling produced no vanishing polynomials.
class PeelError : public FitError {
 public:
  using FitError::FitError;
};

/// No admissible point could be selected.
class SelectionError : public FitError {
 public:
  using FitError::FitError;
};

/// Model discovery (number / dimension identification) failed.
class DiscoveryError : public Error {
 public:
  using Error::Error;
};

}  // namespace gpca
