#pragma once

#include <stdexcept>
#include <string>

namespace aclqr {

enum class ErrorKind {
  kInvalidArgument,  // dimension mismatch, non-finite input, bad option
  kConfig,           // experiment file could not be parsed or validated
  kNumerical,        // solver failure, marginal stability
  kIo,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised when the Riccati iteration fails; carries the last residual seen.
class DareError : public Error {
 public:
  DareError(const std::string& what, double last_residual)
      : Error(ErrorKind::kNumerical, what), last_residual_(last_residual) {}

  double last_residual() const noexcept { return last_residual_; }

 private:
  double last_residual_;
};

[[noreturn]] inline void throw_invalid(const std::string& what) {
  throw Error(ErrorKind::kInvalidArgument, what);
}

inline void require(bool condition, const std::string& what) {
  if (!condition) throw_invalid(what);
}

}  // namespace aclqr
