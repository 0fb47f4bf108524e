#pragma once

#include <stdexcept>
#include <string>

namespace schurgk {

enum class ErrorKind {
  InvalidInput,
  StructureMismatch,
  RankDeficiency,
  ChainConstructionFailure,
  NumericalFailure,
  UnsupportedSize,
  ExperimentFailed,
};

// Single exception type for the library; `kind()` distinguishes the failure.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what, long detail = -1)
      : std::runtime_error(what), kind_(kind), detail_(detail) {}

  ErrorKind kind() const noexcept { return kind_; }

  // Iteration count for numerical failures, step index for matcher
  // failures, -1 otherwise.
  long detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  long detail_;
};

// Process exit code used by the command line tool.
inline int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput:
    case ErrorKind::UnsupportedSize:
      return 2;
    case ErrorKind::StructureMismatch:
    case ErrorKind::ChainConstructionFailure:
      return 3;
    case ErrorKind::RankDeficiency:
    case ErrorKind::NumericalFailure:
    case ErrorKind::ExperimentFailed:
      return 4;
  }
  return 4;
}

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput: return "invalid-input";
    case ErrorKind::StructureMismatch: return "structure-mismatch";
    case ErrorKind::RankDeficiency: return "rank-deficiency";
    case ErrorKind::ChainConstructionFailure: return "chain-construction-failure";
    case ErrorKind::NumericalFailure: return "numerical-failure";
    case ErrorKind::UnsupportedSize: return "unsupported-size";
    case ErrorKind::ExperimentFailed: return "experiment-failed";
  }
  return "error";
}

}  // namespace schurgk
