#ifndef MMX_ERROR_HPP
#define MMX_ERROR_HPP

#include <stdexcept>
#include <string>

namespace mmx {

enum class ErrorCode {
  SingularSystem = 1,
  DimensionMismatch,
  NonFiniteValue,
  BadParams,
  NoConvergence,
  BadStepSize,
  NoProgress,
  BudgetExhausted,
  ConfigError,
  DegenerateFit,
  SlopeNeedsThreePoints,
  IoError,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace mmx

#endif
