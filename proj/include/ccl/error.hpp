#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace ccl {

enum class ErrorKind {
  invalid_argument,    // violated precondition or malformed request
  data_integrity,      // inconsistent or corrupt input data
  insufficient_data,   // not enough observations for an estimator
  generation_failure,  // rejection / iteration budget exhausted
  internal,            // broken internal invariant
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string msg)
      : std::runtime_error(std::move(msg)), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& msg) {
  throw Error(kind, msg);
}

}  // namespace ccl
