#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace mfc {

/// Base class for every error thrown by the library. `kind()` is a stable
/// machine-readable token used by the CLI error line.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

struct DegenerateInput : Error {
  explicit DegenerateInput(const std::string& what) : Error("degenerate_input", what) {}
};

struct UnknownClient : Error {
  explicit UnknownClient(const std::string& what) : Error("unknown_client", what) {}
};

struct Infeasible : Error {
  explicit Infeasible(const std::string& what) : Error("infeasible", what) {}
};

struct InstanceTooLarge : Error {
  explicit InstanceTooLarge(const std::string& what) : Error("instance_too_large", what) {}
};

struct SchemaError : Error {
  explicit SchemaError(const std::string& what) : Error("schema", what) {}
};

struct ParseError : Error {
  explicit ParseError(const std::string& what) : Error("parse", what) {}
};

struct SubtourDetected : Error {
  explicit SubtourDetected(const std::string& what) : Error("subtour_detected", what) {}
};

struct FractionalValue : Error {
  explicit FractionalValue(const std::string& what) : Error("fractional_binary", what) {}
};

}  // namespace mfc
