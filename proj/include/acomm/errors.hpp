#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace acomm {

/// Malformed or out-of-contract input.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An enumeration or closure would exceed its configured size cap.
class ResourceCapExceeded : public std::runtime_error {
 public:
  ResourceCapExceeded(const std::string& what, std::uint64_t required, std::uint64_t cap)
      : std::runtime_error(what + ": requires " + std::to_string(required) +
                           " elements, cap is " + std::to_string(cap)),
        required_(required), cap_(cap) {}
  std::uint64_t required() const noexcept { return required_; }
  std::uint64_t cap() const noexcept { return cap_; }

 private:
  std::uint64_t required_;
  std::uint64_t cap_;
};

/// An internal mathematical invariant failed; always a bug, never bad input.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A numerical tuple does not satisfy the relations it was asked to satisfy.
class VerificationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace acomm
