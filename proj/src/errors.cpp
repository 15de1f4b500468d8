#include "shadowtrace/errors.hpp"

namespace shadowtrace {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::SchemaMismatch: return "SchemaMismatch";
    case ErrorCode::UnknownMember: return "UnknownMember";
    case ErrorCode::KindViolation: return "KindViolation";
    case ErrorCode::TreeViolation: return "TreeViolation";
    case ErrorCode::LayerOutOfRange: return "LayerOutOfRange";
    case ErrorCode::MultipleRoots: return "MultipleRoots";
    case ErrorCode::CycleDetected: return "CycleDetected";
    case ErrorCode::UnknownProcess: return "UnknownProcess";
    case ErrorCode::AlreadyBound: return "AlreadyBound";
    case ErrorCode::NotActive: return "NotActive";
    case ErrorCode::DuplicatePluginName: return "DuplicatePluginName";
    case ErrorCode::NotWatched: return "NotWatched";
    case ErrorCode::NoProcessTree: return "NoProcessTree";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::NotInSubgraph: return "NotInSubgraph";
    case ErrorCode::NoAlerts: return "NoAlerts";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::UnknownFaultRoot: return "UnknownFaultRoot";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
  }
  return "UnknownError";
}

}  // namespace shadowtrace
