#pragma once

#include <stdexcept>
#include <string>

namespace ahwarp {

/// Raised for inputs outside an operation's domain. The CLI maps it to a usage error.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Step-size underflow, step budget exhaustion, or failed event bracketing.
class IntegrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The decaying solution could not be normalized or its horizon did not stabilize.
class CertificateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Root-bracket endpoints with equal signs.
class BracketError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ahwarp
