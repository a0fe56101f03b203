#pragma once

#include <stdexcept>
#include <string>

namespace rlab {

/// Root of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input outside the region where an operation is defined.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// |z| >= 1 handed to an evaluator defined on the open unit disk.
class DomainError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class OutOfRange : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class RadiusExceeded : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class PoleAtR : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class NegativeM : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class VariantUnsupported : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// Schema or semantic violation in a configuration document.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& path, const std::string& what)
      : Error(path.empty() ? what : path + ": " + what), path_(path) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

/// Failure of an iterative numerical procedure.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class NoConvergence : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class IterateEscaped : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// A real-time trajectory reached the unit circle.
class TrajectoryEscaped : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace rlab
