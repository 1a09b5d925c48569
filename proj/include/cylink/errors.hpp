#pragma once

#include <stdexcept>
#include <string>

namespace cylink {

/// Base class for every error raised by the library.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands live in different coefficient fields or carry different orders.
class mismatch_error : public error {
 public:
  using error::error;
};

/// A quantity that is mathematically undefined for the given input
/// (degree of the zero polynomial, non-integral Milnor number, ...).
class domain_error : public error {
 public:
  using error::error;
};

/// Exponent arithmetic left the representable range.
class overflow_error : public error {
 public:
  using error::error;
};

/// Reduction modulo a prime killed a generator entirely.
class degenerate_reduction : public error {
 public:
  using error::error;
};

/// Malformed external input (JSON, CSV, command line).
class parse_error : public error {
 public:
  using error::error;
};

}  // namespace cylink
