#pragma once

#include <stdexcept>
#include <string>

namespace hecke {

// Input that violates a documented precondition (malformed records, bad flags).
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

// A mathematically meaningful refusal: singular matrix, determinant not prime
// to the level, incompatible Hecke pairs, ...
class MathError : public std::domain_error {
 public:
  explicit MathError(const std::string& what) : std::domain_error(what) {}
};

// Something that the theory says cannot happen. Always a bug.
class InternalError : public std::logic_error {
 public:
  explicit InternalError(const std::string& what)
      : std::logic_error("internal error: " + what) {}
};

}  // namespace hecke
