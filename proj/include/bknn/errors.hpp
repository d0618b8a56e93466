#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bknn {

/// Base class for all errors thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A coordinate fell outside (or too close to the edge of) a rule's open domain.
class DomainError : public Error {
 public:
  DomainError(std::size_t dim, double value, double lo, double hi)
      : Error("coordinate " + std::to_string(dim) + " = " + std::to_string(value) +
              " outside open domain (" + std::to_string(lo) + ", " + std::to_string(hi) + ")"),
        dim_(dim),
        value_(value),
        lo_(lo),
        hi_(hi) {}

  DomainError(std::size_t dim, double value, const std::string& what)
      : Error(what), dim_(dim), value_(value), lo_(0), hi_(0) {}

  std::size_t dim() const { return dim_; }
  double value() const { return value_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }

 private:
  std::size_t dim_;
  double value_;
  double lo_, hi_;
};

/// Dimension mismatch or malformed numeric input (NaN/inf coordinates).
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration value (bad flag, bad generator spec, bad rule parameters).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Build or query was handed an empty point set.
class EmptyDatasetError : public Error {
 public:
  EmptyDatasetError() : Error("point set is empty") {}
};

/// File could not be read, written, or parsed.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace bknn
