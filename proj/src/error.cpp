#include "robsel/error.hpp"

namespace robsel {

std::string_view category_name(ErrorCategory category) noexcept {
  switch (category) {
    case ErrorCategory::InvalidArgument:
      return "invalid-argument";
    case ErrorCategory::DegenerateInput:
      return "degenerate-input";
    case ErrorCategory::DimensionMismatch:
      return "dimension-mismatch";
    case ErrorCategory::FileFormat:
      return "file-format";
    case ErrorCategory::MissingData:
      return "missing-data";
    case ErrorCategory::Io:
      return "io";
  }
  return "unknown";
}

}  // namespace robsel
