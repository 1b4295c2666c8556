#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace robsel {

enum class ErrorCategory {
  InvalidArgument,
  DegenerateInput,
  DimensionMismatch,
  FileFormat,
  MissingData,
  Io,
};

std::string_view category_name(ErrorCategory category) noexcept;

/// Every failure raised by the library carries a category so the CLI can map
/// it to a distinct exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

[[noreturn]] inline void fail(ErrorCategory category, const std::string& what) {
  throw Error(category, what);
}

}  // namespace robsel
