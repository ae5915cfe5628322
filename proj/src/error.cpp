#include "fieldmap/error.hpp"

namespace fieldmap {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Io: return "io";
    case ErrorKind::Config: return "config";
    case ErrorKind::Schema: return "schema";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::EmptyCorpus: return "empty-corpus";
    case ErrorKind::EmptyMatrix: return "empty-matrix";
    case ErrorKind::NotFound: return "not-found";
    case ErrorKind::NoEnvironment: return "no-environment";
    case ErrorKind::Format: return "format";
    case ErrorKind::OutOfRange: return "out-of-range";
    case ErrorKind::DegenerateVariable: return "degenerate-variable";
    case ErrorKind::InvalidCorrelation: return "invalid-correlation";
    case ErrorKind::DegenerateEmbedding: return "degenerate-embedding";
  }
  return "unknown";
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Config:
    case ErrorKind::Schema:
      return 2;
    case ErrorKind::DegenerateVariable:
    case ErrorKind::InvalidCorrelation:
    case ErrorKind::DegenerateEmbedding:
      return 4;
    default:
      return 3;
  }
}

}  // namespace fieldmap
