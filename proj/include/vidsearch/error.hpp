#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace vidsearch {

enum class ErrorCode {
  kInvalidArgument,
  kNotFound,
  kParseError,
  kIoError,
  kUndefinedSimilarity,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the engine. `offset` is set for query-string
// errors and points at the byte where the problem starts.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<std::size_t> offset = std::nullopt)
      : std::runtime_error(message), code_(code), offset_(offset) {}

  ErrorCode code() const noexcept { return code_; }
  std::optional<std::size_t> offset() const noexcept { return offset_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> offset_;
};

[[noreturn]] inline void throw_invalid(const std::string& message) {
  throw Error(ErrorCode::kInvalidArgument, message);
}

[[noreturn]] inline void throw_not_found(const std::string& message) {
  throw Error(ErrorCode::kNotFound, message);
}

}  // namespace vidsearch
