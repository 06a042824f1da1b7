#pragma once

#include <stdexcept>
#include <string>

namespace fsmi {

enum class ErrorCode {
  invalid_argument = 1,
  out_of_range = 2,
  numerical_range = 3,
  io = 4,
  parse = 5,
  no_candidates = 6,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

// Takes a C string so the message is only built on failure.
inline void require(bool ok, const char* what) {
  if (!ok) fail(ErrorCode::invalid_argument, what);
}

}  // namespace fsmi
