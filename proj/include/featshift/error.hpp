#pragma once

#include <stdexcept>
#include <string>

namespace featshift {

/// Base class for every error raised by the library. The kind decides the
/// CLI exit code.
class Error : public std::runtime_error {
public:
  enum class Kind {
    InvalidData,
    InsufficientData,
    Shape,
    InvalidArgument,
    WeightTooLarge,
    UnreachableTarget,
    Config,
  };

  Error(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

private:
  Kind kind_;
};

struct InvalidDataError : Error {
  explicit InvalidDataError(const std::string& what) : Error(Kind::InvalidData, what) {}
};

struct InsufficientDataError : Error {
  explicit InsufficientDataError(const std::string& what) : Error(Kind::InsufficientData, what) {}
};

struct ShapeError : Error {
  explicit ShapeError(const std::string& what) : Error(Kind::Shape, what) {}
};

struct InvalidArgumentError : Error {
  explicit InvalidArgumentError(const std::string& what) : Error(Kind::InvalidArgument, what) {}
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& what) : Error(Kind::Config, what) {}
};

/// Raised when I + w*A is not positive definite. `minor` is the 0-based index
/// of the first leading minor whose Cholesky pivot failed.
struct WeightTooLargeError : Error {
  WeightTooLargeError(const std::string& what, int minor)
      : Error(Kind::WeightTooLarge, what), minor(minor) {}
  int minor;
};

struct UnreachableTargetError : Error {
  UnreachableTargetError(const std::string& what, double max_mi)
      : Error(Kind::UnreachableTarget, what), max_mi(max_mi) {}
  double max_mi;
};

}  // namespace featshift
