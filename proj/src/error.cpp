#include "mvsrc/error.hpp"

namespace mvsrc {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::Dimension: return "dimension error";
    case ErrorCode::DegenerateSample: return "degenerate sample";
    case ErrorCode::EmptyDictionary: return "empty dictionary";
    case ErrorCode::InvalidClass: return "invalid class";
    case ErrorCode::InvalidParameter: return "invalid parameter";
    case ErrorCode::InvalidInput: return "invalid input";
    case ErrorCode::SizeLimit: return "size limit exceeded";
    case ErrorCode::InvalidConfig: return "invalid config";
    case ErrorCode::Ingestion: return "ingestion error";
    case ErrorCode::Count: return "count error";
    case ErrorCode::Usage: return "usage error";
  }
  return "error";
}

void fail(ErrorCode code, const std::string& what) {
  throw Error(code, std::string(to_string(code)) + ": " + what);
}

}  // namespace mvsrc
