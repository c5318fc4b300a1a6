#pragma once

#include <stdexcept>
#include <string>

namespace fastlight {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Invalid or inconsistent configuration; `path` names the offending key.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, const std::string& what)
      : std::runtime_error(path.empty() ? what : path + ": " + what),
        path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

/// Operation not defined for the given configuration (e.g. broadened residuals).
class UnsupportedConfiguration : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// NaN/Inf encountered while integrating. `x_cm` is the last good position.
class NumericalFailure : public std::runtime_error {
 public:
  NumericalFailure(const std::string& what, double x_cm)
      : std::runtime_error(what), x_cm_(x_cm) {}

  double last_good_x() const noexcept { return x_cm_; }

 private:
  double x_cm_;
};

/// The advanced peak has been pushed against the start of the retarded-time window.
class WindowOverflow : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

}  // namespace fastlight
