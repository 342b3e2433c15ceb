#pragma once

#include <stdexcept>
#include <string>

namespace lampwalk {

/// Root of every error thrown by the library. The CLI maps the concrete
/// subclasses onto process exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input: unparsable elements, mismatched group
/// variants, probabilities that do not sum to one.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// Operands belong to different base-group variants (free word vs lattice
/// vector) or different lamp moduli.
class VariantMismatch : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

/// A desk-scale limit (ball radius, exact TSP sites, walk length) would be
/// exceeded. The message names the cap.
class CapExceeded : public Error {
 public:
  CapExceeded(const std::string& cap_name, long long cap, long long requested)
      : Error(cap_name + " cap exceeded: requested " + std::to_string(requested) +
              ", cap " + std::to_string(cap)),
        cap_name_(cap_name), cap_(cap), requested_(requested) {}

  const std::string& cap_name() const noexcept { return cap_name_; }
  long long cap() const noexcept { return cap_; }
  long long requested() const noexcept { return requested_; }

 private:
  std::string cap_name_;
  long long cap_;
  long long requested_;
};

/// A checked mathematical invariant failed (used by the verify suite).
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace lampwalk
