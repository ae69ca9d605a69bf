#pragma once

#include <stdexcept>
#include <string>

namespace ppcert {

// Process exit codes used by the CLI; library errors carry the category so
// the tool can map a failure to the right code without string matching.
enum class ErrorCategory {
  input = 2,        // malformed files, bad arguments, contract violations
  unsupported = 3,  // inputs outside the supported fragment (cubic fields, ...)
  resource = 4,     // caps exceeded (power cap, enumeration bound, search cap)
};

class Error : public std::runtime_error {
public:
  Error(std::string kind, const std::string& what,
        ErrorCategory cat = ErrorCategory::input)
      : std::runtime_error(kind + ": " + what),
        kind_(std::move(kind)),
        cat_(cat) {}

  const std::string& kind() const { return kind_; }
  ErrorCategory category() const { return cat_; }

private:
  std::string kind_;
  ErrorCategory cat_;
};

inline Error input_error(const std::string& kind, const std::string& what) {
  return Error(kind, what, ErrorCategory::input);
}
inline Error unsupported_error(const std::string& kind,
                               const std::string& what) {
  return Error(kind, what, ErrorCategory::unsupported);
}
inline Error resource_error(const std::string& kind, const std::string& what) {
  return Error(kind, what, ErrorCategory::resource);
}

}  // namespace ppcert
