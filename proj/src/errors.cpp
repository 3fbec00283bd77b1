#include "mgcert/errors.hpp"

namespace mgcert {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonSymmetric: return "NonSymmetric";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::NotSpd: return "NotSpd";
    case ErrorKind::SimilarityNotSymmetric: return "SimilarityNotSymmetric";
    case ErrorKind::NotAConvergent: return "NotAConvergent";
    case ErrorKind::Singular: return "Singular";
    case ErrorKind::BadDimension: return "BadDimension";
    case ErrorKind::BadParameter: return "BadParameter";
    case ErrorKind::CrossCheckFailed: return "CrossCheckFailed";
    case ErrorKind::DegeneratePencil: return "DegeneratePencil";
    case ErrorKind::OutOfTheoryRange: return "OutOfTheoryRange";
    case ErrorKind::NontrivialCaseViolated: return "NontrivialCaseViolated";
    case ErrorKind::BadBracket: return "BadBracket";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

void fail(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

}  // namespace mgcert
