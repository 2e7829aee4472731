// SPDX-License-Identifier: Apache-2.0
#ifndef BALLISTIC_CLI_TEXT_HPP
#define BALLISTIC_CLI_TEXT_HPP

#include <charconv>
#include <cstdint>
#include <string>

namespace bcli {

// Shortest round-trip formatting via to_chars: locale-free and byte-stable,
// which the output determinism contract depends on.
inline std::string fmt(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

inline std::string fmt(std::uint64_t v) {
  char buf[24];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

inline std::string fmt(std::int64_t v) {
  char buf[24];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

}  // namespace bcli

#endif
