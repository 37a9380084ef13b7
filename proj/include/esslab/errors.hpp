#pragma once

#include <stdexcept>
#include <string>

namespace esslab {

/// Evaluation outside the region where a quantity is defined (e.g. g(r) = 0).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A caller-supplied argument violates an operation precondition.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An iterative method did not reach its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The operation does not apply to this kind of model.
class NotApplicable : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Malformed model or configuration file. `where` carries a line or field locator.
class FileFormatError : public std::runtime_error {
 public:
  FileFormatError(std::string where, const std::string& what);
  const std::string& where() const noexcept { return where_; }

 private:
  std::string where_;
};

}  // namespace esslab
