#ifndef ENGEL_ERRORS_HPP
#define ENGEL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace engel {

// Machine-readable error codes, mirrored by the CLI's error JSON.
enum class ErrorCode {
  DimensionMismatch,
  KindMismatch,
  StepTooLarge,
  InvalidArgument,
  SingularDirection,
  NoConvergence,
  NotAdmissible,
  NotDegenerate,
  EmptyS,
  SteeringFailed,
  GridMismatch,
  ParseError,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& msg)
      : std::runtime_error(msg), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace engel

#endif
