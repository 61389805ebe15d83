#pragma once

#include <stdexcept>
#include <string>

namespace twlab {

// Every failure raised by the library carries a short machine-readable kind
// so the CLI can emit a structured error without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

// Malformed input: bad file syntax, unknown names, violated type invariants.
class InvalidInput : public Error {
 public:
  explicit InvalidInput(const std::string& message) : Error("invalid-input", message) {}
};

// A configured size cap would be exceeded by an exhaustive procedure.
class CapExceeded : public Error {
 public:
  explicit CapExceeded(const std::string& message) : Error("cap-exceeded", message) {}
};

// An operation was called outside its documented precondition.
class PreconditionFailed : public Error {
 public:
  explicit PreconditionFailed(const std::string& message)
      : Error("precondition-failed", message) {}
};

}  // namespace twlab
