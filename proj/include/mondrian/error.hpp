#pragma once

#include <stdexcept>
#include <string>

namespace mondrian {

enum class ErrorCode {
  Io,
  EmptyFile,
  InvalidArgument,
  IllegalOverlap,
  EmptyLayout,
  DuplicateFile,
  InvalidRegion,
  NotFound,
  VersionConflict,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::Io: return "io_error";
    case ErrorCode::EmptyFile: return "empty_file";
    case ErrorCode::InvalidArgument: return "invalid_argument";
    case ErrorCode::IllegalOverlap: return "illegal_overlap";
    case ErrorCode::EmptyLayout: return "empty_layout";
    case ErrorCode::DuplicateFile: return "duplicate_file";
    case ErrorCode::InvalidRegion: return "invalid_region";
    case ErrorCode::NotFound: return "not_found";
    case ErrorCode::VersionConflict: return "version_conflict";
  }
  return "unknown";
}

/// Library-wide exception carrying a machine-readable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace mondrian
