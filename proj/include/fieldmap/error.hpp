#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fieldmap {

enum class ErrorKind {
  Io,
  Config,
  Schema,
  Parse,
  EmptyCorpus,
  EmptyMatrix,
  NotFound,
  NoEnvironment,
  Format,
  OutOfRange,
  DegenerateVariable,
  InvalidCorrelation,
  DegenerateEmbedding,
};

std::string_view to_string(ErrorKind kind);

// Exit status the command line tool reports for an error of this kind:
// 2 for configuration problems, 3 for bad input data, 4 for numeric degeneracy.
int exit_code(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace fieldmap
