// SPDX-License-Identifier: Apache-2.0
#ifndef BALLISTIC_ERRORS_HPP
#define BALLISTIC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ballistic {

enum class ErrorCode {
  invalid_argument,
  exact_tie,
  start_coincidence,
  no_bracket,
  window_exhausted,
  unsafe_horizon,
  insufficient_points,
  nonpositive_density,
  unavailable,
  internal,
};

/// Library error carrying a machine-inspectable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void throw_error(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace ballistic

#endif
