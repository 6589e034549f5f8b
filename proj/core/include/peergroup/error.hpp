#pragma once

#include <stdexcept>
#include <string>

namespace peergroup {

// Base for every recoverable, user-facing failure (bad input, bad configuration).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// A value lies outside the domain required by an operation (e.g. a
// proportion outside [0,1], a zero-variance column).
class DomainError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

// An internal invariant was broken. Indicates a bug, not bad input.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace peergroup
