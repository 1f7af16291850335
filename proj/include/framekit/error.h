#ifndef FRAMEKIT_ERROR_H_
#define FRAMEKIT_ERROR_H_

#include <stdexcept>
#include <string>

namespace framekit {

enum class ErrorCode {
  kInvalidArgument = 1,
  kFrozenStore,
  kEmptyName,
  kForeignHandle,
  kDanglingHandle,
  kDuplicateId,
  kSyntax,
  kUnresolvedReference,
  kDuplicateLabel,
  kSchema,
  kInvalidAction,
  kIndexOutOfRange,
  kUnrepresentable,
  kTokenMismatch,
  kLengthMismatch,
  kShapeMismatch,
  kNonFiniteLoss,
  kIo,
};

const char *ErrorCodeName(ErrorCode code);

// All toolkit failures are reported as framekit::Error. The C API maps the
// code onto its status enum.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace framekit

#endif  // FRAMEKIT_ERROR_H_
