#pragma once

#include <stdexcept>
#include <string>

namespace abf {

enum class Status {
  Ok = 0,
  InvalidArgument = 1,
  OutOfRange = 2,
  NotConverged = 3,
  Degenerate = 4,
  Io = 5,
  Internal = 6,
};

const char* status_name(Status s);

class Error : public std::runtime_error {
 public:
  Error(Status code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  Status code() const noexcept { return code_; }

 private:
  Status code_;
};

[[noreturn]] inline void fail(Status code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool ok, Status code, const std::string& what) {
  if (!ok) fail(code, what);
}

constexpr double kPi = 3.141592653589793238462643383279502884;

}  // namespace abf
