#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace magkit {

// Input errors map to CLI exit code 1, solver errors to exit code 2.
enum class ErrorKind { input, solver };

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, std::string code, const std::string& message)
      : std::runtime_error(message), kind_(kind), code_(std::move(code)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& code() const noexcept { return code_; }

private:
  ErrorKind kind_;
  std::string code_;
};

[[noreturn]] inline void throw_input(const char* code, const std::string& message) {
  throw Error(ErrorKind::input, code, message);
}

[[noreturn]] inline void throw_solver(const char* code, const std::string& message) {
  throw Error(ErrorKind::solver, code, message);
}

}  // namespace magkit
