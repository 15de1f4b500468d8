// Error codes and the exception type shared by all shadowtrace modules.

#pragma once

#include <stdexcept>
#include <string>

namespace shadowtrace {

enum class ErrorCode {
  DuplicateId,
  SchemaMismatch,
  UnknownMember,
  KindViolation,
  TreeViolation,
  LayerOutOfRange,
  MultipleRoots,
  CycleDetected,
  UnknownProcess,
  AlreadyBound,
  NotActive,
  DuplicatePluginName,
  NotWatched,
  NoProcessTree,
  InsufficientData,
  NotInSubgraph,
  NoAlerts,
  InvalidSpec,
  UnknownFaultRoot,
  ParseError,
  IoError,
  InvalidConfig,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace shadowtrace
