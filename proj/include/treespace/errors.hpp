#pragma once

#include <stdexcept>
#include <string>

namespace treespace {

// Error category, used by the CLI as a machine-parsable prefix and to pick
// exit codes.
enum class ErrorCategory {
  parse,        // malformed Newick / config / split text
  validation,   // violated invariants (incompatible splits, bad lengths, ...)
  io,           // file system failures
  degenerate,   // request is well-formed but has no answer (e.g. d2_0 = 0)
  infeasible,   // constraint system admits no solution
  usage,        // bad command-line arguments
};

inline const char* to_string(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::parse: return "parse";
    case ErrorCategory::validation: return "validation";
    case ErrorCategory::io: return "io";
    case ErrorCategory::degenerate: return "degenerate";
    case ErrorCategory::infeasible: return "infeasible";
    case ErrorCategory::usage: return "usage";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory cat, const std::string& msg)
      : std::runtime_error(msg), cat_(cat) {}
  ErrorCategory category() const { return cat_; }

 private:
  ErrorCategory cat_;
};

[[noreturn]] inline void fail(ErrorCategory cat, const std::string& msg) {
  throw Error(cat, msg);
}

}  // namespace treespace
