#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace spencer {

/// Invalid input: bad labels, malformed matrices, non-dominant weights.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A requested space exceeds the configured dimension cap.
class ResourceCapError : public std::runtime_error {
 public:
  ResourceCapError(const std::string& what, std::uint64_t requested, std::uint64_t cap)
      : std::runtime_error(what + ": requested dimension " + std::to_string(requested) +
                           " exceeds cap " + std::to_string(cap)),
        requested_(requested),
        cap_(cap) {}
  std::uint64_t requested() const { return requested_; }
  std::uint64_t cap() const { return cap_; }

 private:
  std::uint64_t requested_;
  std::uint64_t cap_;
};

/// An identity that must hold exactly did not (Jacobi, structural isomorphism, rank certificate).
class IdentityFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace spencer
