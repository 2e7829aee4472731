// SPDX-License-Identifier: Apache-2.0
#ifndef BALLISTIC_CLI_CONFIG_HPP
#define BALLISTIC_CLI_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace bcli {

/// Exit codes: 0 success, 1 runtime error, 2 usage error.
struct UsageError {
  std::string message;
};

struct RunConfig {
  std::string command;
  std::optional<double> p;
  std::string law_file;
  std::string domain = "full";  // full | half
  std::uint64_t n = 1000;
  std::uint64_t seed = 0;
  std::uint32_t replicas = 8;
  std::string times;  // "a,b,c" or geometric "lo:hi:points_per_decade"
  double horizon = 0.0;
  std::string grid;  // comma-separated probabilities
  std::uint32_t parallelism = 1;
  std::uint64_t max_steps = 0;  // explore; 0 means the particle count
  std::uint64_t instances = 1000;
  std::string out;
  std::string format;  // csv | jsonl | svg; per-command default when empty

  bool operator==(const RunConfig&) const = default;
};

/// Parses argv plus an optional JSON config file (flags override file
/// values). Throws UsageError on bad input; help requests exit directly.
RunConfig parse_config(int argc, const char* const* argv);

/// Effective-config document; parse_config accepts it back unchanged.
std::string config_to_json(const RunConfig& config);

std::vector<double> parse_double_list(const std::string& text, const std::string& key);
std::vector<double> parse_times_spec(const std::string& text);

}  // namespace bcli

#endif
