// SPDX-License-Identifier: Apache-2.0
#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>

#include "CLI11.hpp"
#include "json.hpp"
#include "text.hpp"

namespace bcli {

namespace {

const std::set<std::string> kCommands = {"simulate", "density",      "sweep",
                                         "explore",  "oracle-check", "render"};

void apply_json(const nlohmann::json& doc, RunConfig& cfg) {
  for (const auto& [key, value] : doc.items()) {
    if (key == "command") cfg.command = value.get<std::string>();
    else if (key == "p") cfg.p = value.get<double>();
    else if (key == "law_file") cfg.law_file = value.get<std::string>();
    else if (key == "domain") cfg.domain = value.get<std::string>();
    else if (key == "n") cfg.n = value.get<std::uint64_t>();
    else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
    else if (key == "replicas") cfg.replicas = value.get<std::uint32_t>();
    else if (key == "times") cfg.times = value.get<std::string>();
    else if (key == "horizon") cfg.horizon = value.get<double>();
    else if (key == "grid") cfg.grid = value.get<std::string>();
    else if (key == "parallelism") cfg.parallelism = value.get<std::uint32_t>();
    else if (key == "max_steps") cfg.max_steps = value.get<std::uint64_t>();
    else if (key == "instances") cfg.instances = value.get<std::uint64_t>();
    else if (key == "out") cfg.out = value.get<std::string>();
    else if (key == "format") cfg.format = value.get<std::string>();
    else throw UsageError{"config file: unknown key '" + key + "'"};
  }
}

}  // namespace

RunConfig parse_config(int argc, const char* const* argv) {
  CLI::App app{"ballistic: one-dimensional ballistic annihilation simulator"};
  app.footer(
      "Commands:\n"
      "  simulate      resolve one system, write per-particle fates (JSONL)\n"
      "  density       Monte Carlo alive-density per speed class (CSV)\n"
      "  sweep         survival + exponent across a parameter grid (CSV)\n"
      "  explore       exploration-walk trace of a half-line system (CSV)\n"
      "  oracle-check  differential test of the fast resolver (exit 0 iff equal)\n"
      "  render        space-time diagram (SVG)\n");

  RunConfig flags;  // values set on the command line
  std::string command;
  std::string config_path;
  std::string emit_path;

  app.add_option("command", command, "Subcommand (may also come from --config)");
  app.add_option("--config", config_path, "JSON config file; flags override its values");
  app.add_option("--emit-config", emit_path, "Write the effective config as JSON and continue");
  auto* opt_p = app.add_option("--p", "Three-speed parameter p in [0, 1]");
  auto* opt_law = app.add_option("--law-file", flags.law_file, "JSON speed-law file");
  auto* opt_domain = app.add_option("--domain", flags.domain, "Domain: full | half")
                         ->check(CLI::IsMember({"full", "half"}));
  auto* opt_n = app.add_option("--n", flags.n, "Particles per side (full) or total (half)");
  auto* opt_seed = app.add_option("--seed", flags.seed, "Master seed (64-bit)");
  auto* opt_replicas = app.add_option("--replicas", flags.replicas, "Monte Carlo replicas");
  auto* opt_times = app.add_option("--times", flags.times,
                                   "Time grid: 'a,b,c' or geometric 'lo:hi:points_per_decade'");
  auto* opt_horizon = app.add_option("--horizon", flags.horizon, "Time horizon (0 = default safe)");
  auto* opt_grid = app.add_option("--grid", flags.grid, "Comma-separated p grid (sweep)");
  auto* opt_par = app.add_option("--parallelism", flags.parallelism, "Worker threads (sweep)");
  auto* opt_steps = app.add_option("--max-steps", flags.max_steps, "Walk step cap (0 = n)");
  auto* opt_inst = app.add_option("--instances", flags.instances, "Instances (oracle-check)");
  auto* opt_out = app.add_option("--out", flags.out, "Output path (default: stdout)");
  auto* opt_format = app.add_option("--format", flags.format, "Output format: csv | jsonl | svg")
                         ->check(CLI::IsMember({"csv", "jsonl", "svg"}));

  double p_value = 0.0;
  opt_p->check(CLI::Range(0.0, 1.0));

  try {
    app.parse(argc, const_cast<char**>(argv));
  } catch (const CLI::CallForHelp& e) {
    std::exit(app.exit(e));
  } catch (const CLI::ParseError& e) {
    throw UsageError{e.what()};
  }
  if (opt_p->count() > 0) p_value = opt_p->as<double>();

  RunConfig cfg;
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) throw UsageError{"config: cannot open '" + config_path + "'"};
    nlohmann::json doc;
    try {
      in >> doc;
    } catch (const nlohmann::json::exception& e) {
      throw UsageError{std::string("config: invalid JSON: ") + e.what()};
    }
    try {
      apply_json(doc, cfg);
    } catch (const nlohmann::json::exception& e) {
      throw UsageError{std::string("config: bad value type: ") + e.what()};
    }
  }

  // Flags override file values.
  if (!command.empty()) cfg.command = command;
  if (opt_p->count() > 0) cfg.p = p_value;
  if (opt_law->count() > 0) cfg.law_file = flags.law_file;
  if (opt_domain->count() > 0) cfg.domain = flags.domain;
  if (opt_n->count() > 0) cfg.n = flags.n;
  if (opt_seed->count() > 0) cfg.seed = flags.seed;
  if (opt_replicas->count() > 0) cfg.replicas = flags.replicas;
  if (opt_times->count() > 0) cfg.times = flags.times;
  if (opt_horizon->count() > 0) cfg.horizon = flags.horizon;
  if (opt_grid->count() > 0) cfg.grid = flags.grid;
  if (opt_par->count() > 0) cfg.parallelism = flags.parallelism;
  if (opt_steps->count() > 0) cfg.max_steps = flags.max_steps;
  if (opt_inst->count() > 0) cfg.instances = flags.instances;
  if (opt_out->count() > 0) cfg.out = flags.out;
  if (opt_format->count() > 0) cfg.format = flags.format;

  if (cfg.command.empty()) throw UsageError{"missing command (positional or 'command' in --config)"};
  if (!kCommands.count(cfg.command)) throw UsageError{"unknown command '" + cfg.command + "'"};
  if (cfg.p && !cfg.law_file.empty()) {
    throw UsageError{"conflicting options: --p and --law-file are mutually exclusive"};
  }
  if (cfg.domain != "full" && cfg.domain != "half") {
    throw UsageError{"domain: must be 'full' or 'half'"};
  }
  if (!cfg.format.empty() && cfg.format != "csv" && cfg.format != "jsonl" && cfg.format != "svg") {
    throw UsageError{"format: must be csv, jsonl or svg"};
  }

  if (!emit_path.empty()) {
    std::ofstream out(emit_path);
    if (!out) throw UsageError{"emit-config: cannot write '" + emit_path + "'"};
    out << config_to_json(cfg) << "\n";
  }
  return cfg;
}

std::string config_to_json(const RunConfig& cfg) {
  nlohmann::json doc;
  doc["command"] = cfg.command;
  if (cfg.p) doc["p"] = *cfg.p;
  if (!cfg.law_file.empty()) doc["law_file"] = cfg.law_file;
  doc["domain"] = cfg.domain;
  doc["n"] = cfg.n;
  doc["seed"] = cfg.seed;
  doc["replicas"] = cfg.replicas;
  if (!cfg.times.empty()) doc["times"] = cfg.times;
  doc["horizon"] = cfg.horizon;
  if (!cfg.grid.empty()) doc["grid"] = cfg.grid;
  doc["parallelism"] = cfg.parallelism;
  doc["max_steps"] = cfg.max_steps;
  doc["instances"] = cfg.instances;
  if (!cfg.out.empty()) doc["out"] = cfg.out;
  if (!cfg.format.empty()) doc["format"] = cfg.format;
  return doc.dump(2);
}

std::vector<double> parse_double_list(const std::string& text, const std::string& key) {
  std::vector<double> values;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    if (comma == std::string::npos) comma = text.size();
    const std::string item = text.substr(start, comma - start);
    if (item.empty()) throw UsageError{key + ": empty element in list"};
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    if (end == nullptr || *end != '\0' || !std::isfinite(v)) {
      throw UsageError{key + ": '" + item + "' is not a number"};
    }
    values.push_back(v);
    start = comma + 1;
  }
  if (values.empty()) throw UsageError{key + ": empty list"};
  return values;
}

std::vector<double> parse_times_spec(const std::string& text) {
  if (text.find(':') == std::string::npos) return parse_double_list(text, "times");
  // geometric lo:hi:points_per_decade
  std::vector<double> parts;
  std::size_t start = 0;
  for (int i = 0; i < 3; ++i) {
    std::size_t colon = text.find(':', start);
    if (colon == std::string::npos) colon = text.size();
    const std::string item = text.substr(start, colon - start);
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    if (item.empty() || end == nullptr || *end != '\0') {
      throw UsageError{"times: bad geometric spec, expected lo:hi:points_per_decade"};
    }
    parts.push_back(v);
    start = colon + 1;
  }
  const double lo = parts[0], hi = parts[1];
  const double ppd = parts[2];
  if (!(lo > 0.0 && hi > lo && ppd >= 1.0)) {
    throw UsageError{"times: geometric spec needs 0 < lo < hi and points_per_decade >= 1"};
  }
  const auto steps = static_cast<std::size_t>(std::ceil(std::log10(hi / lo) * ppd));
  std::vector<double> times(std::max<std::size_t>(steps, 1) + 1);
  for (std::size_t i = 0; i < times.size(); ++i) {
    times[i] = lo * std::pow(hi / lo, static_cast<double>(i) / static_cast<double>(times.size() - 1));
  }
  times.back() = hi;
  return times;
}

}  // namespace bcli
