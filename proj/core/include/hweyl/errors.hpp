#pragma once

#include <stdexcept>
#include <string>

namespace hweyl {

// Precondition violated by a caller-supplied parameter.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

// An evaluation point fell inside the guard band around a spectral jump.
class JumpPointError : public ValidationError {
 public:
  JumpPointError(const std::string& what, double x) : ValidationError(what), x_(x) {}
  double x() const noexcept { return x_; }

 private:
  double x_;
};

// Memory budget exceeded, allocation failure, integer overflow of an exact
// count, or an output sink that cannot be written.
class ResourceError : public std::runtime_error {
 public:
  explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

void require(bool condition, const std::string& message);

}  // namespace hweyl
