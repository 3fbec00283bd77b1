#pragma once

// Error taxonomy shared by every module. Each failure carries a kind so the
// command line tool can map it onto a stable process exit code.

#include <stdexcept>
#include <string>

namespace mgcert {

enum class ErrorKind {
  NonSymmetric,
  NoConvergence,
  NotSpd,
  SimilarityNotSymmetric,
  NotAConvergent,
  Singular,
  BadDimension,
  BadParameter,
  CrossCheckFailed,
  DegeneratePencil,
  OutOfTheoryRange,
  NontrivialCaseViolated,
  BadBracket,
  Io,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

}  // namespace mgcert
