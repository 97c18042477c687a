#pragma once

#include <stdexcept>
#include <string>

namespace mvsrc {

enum class ErrorCode {
  Dimension,
  DegenerateSample,
  EmptyDictionary,
  InvalidClass,
  InvalidParameter,
  InvalidInput,
  SizeLimit,
  InvalidConfig,
  Ingestion,
  Count,
  Usage,
};

const char* to_string(ErrorCode code) noexcept;

// All library failures are reported through this type; `code()` lets callers
// branch without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

}  // namespace mvsrc
