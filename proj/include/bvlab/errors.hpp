#pragma once

#include <stdexcept>
#include <string>

namespace bvlab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shape mismatch: wrong dimension, malformed support, elements of different spaces.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// A generator was evaluated outside its domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Unknown catalog/registry identifier.
class LookupError : public Error {
 public:
  using Error::Error;
};

/// Numeric parameter outside its admissible range.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Malformed experiment or run configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A rule characterizes only complete spaces and an incomplete one was requested.
class CompletenessRequired : public Error {
 public:
  CompletenessRequired(const std::string& what, std::string counterexample)
      : Error(what), counterexample_(std::move(counterexample)) {}

  /// Catalog id of the experiment that shows the rule failing without completeness.
  const std::string& counterexample() const noexcept { return counterexample_; }

 private:
  std::string counterexample_;
};

}  // namespace bvlab
