#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fractim {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Evaluation outside the natural domain of an expression (log of a
// non-positive value, division by zero, fractional power of a negative
// base), or an enclosure that cannot exclude such a point.
class DomainError : public Error {
 public:
  using Error::Error;
};

// A constructor or operation argument violates a documented invariant.
class InvariantError : public Error {
 public:
  using Error::Error;
};

// A combinatorial limit (sample cap, rejection-sampling retry cap) was hit.
class CapacityError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t position)
      : Error(message + " (at position " + std::to_string(position) + ")"),
        position(position) {}
  std::size_t position;
};

}  // namespace fractim
