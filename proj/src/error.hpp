#pragma once

#include <stdexcept>
#include <string>

namespace ttc {

/// Error categories. They map one-to-one onto the C API status codes and
/// onto the CLI exit codes (parse/argument/io -> 2, shape -> 3, diverged -> 4).
enum class Errc {
  ok = 0,
  invalid_argument,
  parse,
  shape_mismatch,
  diverged,
  io,
};

class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& msg) {
  throw Error(code, msg);
}

inline void require(bool cond, Errc code, const std::string& msg) {
  if (!cond) fail(code, msg);
}

}  // namespace ttc
