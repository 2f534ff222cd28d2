#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace lhd {

/// Base class for domain failures raised by the library. Invalid arguments
/// (bad grid sizes, malformed configs) use std::invalid_argument instead.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A criterion was requested for a design too small to define it.
class UndefinedCriterionError : public Error {
 public:
  using Error::Error;
};

/// Audze-Eglais on a design with two coincident points.
class SingularCriterionError : public Error {
 public:
  SingularCriterionError(std::size_t i, std::size_t j)
      : Error("points " + std::to_string(i) + " and " + std::to_string(j) +
              " coincide; inverse-distance criterion is singular"),
        first(i),
        second(j) {}

  std::size_t first;
  std::size_t second;
};

/// More dimensions than levels: no point with pairwise distinct coordinates.
class InfeasibleSeedError : public Error {
 public:
  using Error::Error;
};

/// Some dimension of a partial design has no free level left.
class ExhaustedLevelsError : public Error {
 public:
  explicit ExhaustedLevelsError(std::size_t dim)
      : Error("dimension " + std::to_string(dim + 1) + " has no unused level"), dimension(dim) {}

  std::size_t dimension;
};

/// A design file could not be parsed. `line` is 1-based; 0 when not applicable.
class DesignFormatError : public Error {
 public:
  DesignFormatError(std::size_t line_no, std::string field_name, const std::string& what)
      : Error(line_no == 0 ? field_name + ": " + what
                           : "line " + std::to_string(line_no) + ", " + field_name + ": " + what),
        line(line_no),
        field(std::move(field_name)) {}

  std::size_t line;
  std::string field;
};

}  // namespace lhd
