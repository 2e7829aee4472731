// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ballistic.h"
#include "config.hpp"
#include "json.hpp"
#include "svg.hpp"
#include "text.hpp"

namespace bcli {

namespace {

struct RuntimeError {
  std::string message;
};

void check(ba_status status) {
  if (status != BA_OK) {
    throw RuntimeError{std::string(ba_status_name(status)) + ": " + ba_last_error()};
  }
}

using LawPtr = std::unique_ptr<ba_law, decltype(&ba_law_free)>;
using SystemPtr = std::unique_ptr<ba_system, decltype(&ba_system_free)>;
using OutcomePtr = std::unique_ptr<ba_outcome, decltype(&ba_outcome_free)>;
using TracePtr = std::unique_ptr<ba_trace, decltype(&ba_trace_free)>;
using DensityPtr = std::unique_ptr<ba_density, decltype(&ba_density_free)>;
using SweepPtr = std::unique_ptr<ba_sweep, decltype(&ba_sweep_free)>;

struct LawSpec {
  LawPtr law;
  bool continuous = false;
};

LawSpec law_from_config(const RunConfig& cfg) {
  ba_law* law = nullptr;
  if (cfg.p) {
    check(ba_law_three_speed(*cfg.p, &law));
    return {LawPtr(law, ba_law_free), false};
  }
  if (cfg.law_file.empty()) throw UsageError{"missing law: pass --p or --law-file"};
  std::ifstream in(cfg.law_file);
  if (!in) throw UsageError{"law-file: cannot open '" + cfg.law_file + "'"};
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw UsageError{std::string("law-file: invalid JSON: ") + e.what()};
  }
  const std::string type = doc.value("type", "");
  if (type == "three-speed") {
    if (!doc.contains("p")) throw UsageError{"law-file: three-speed law needs key 'p'"};
    check(ba_law_three_speed(doc["p"].get<double>(), &law));
    return {LawPtr(law, ba_law_free), false};
  }
  if (type == "discrete") {
    if (!doc.contains("atoms")) throw UsageError{"law-file: discrete law needs key 'atoms'"};
    std::vector<double> speeds, weights;
    for (const auto& atom : doc["atoms"]) {
      speeds.push_back(atom.at(0).get<double>());
      weights.push_back(atom.at(1).get<double>());
    }
    check(ba_law_discrete(speeds.data(), weights.data(), speeds.size(), &law));
    return {LawPtr(law, ba_law_free), false};
  }
  if (type == "uniform") {
    if (!doc.contains("lo") || !doc.contains("hi")) {
      throw UsageError{"law-file: uniform law needs keys 'lo' and 'hi'"};
    }
    check(ba_law_uniform(doc["lo"].get<double>(), doc["hi"].get<double>(), &law));
    return {LawPtr(law, ba_law_free), true};
  }
  throw UsageError{"law-file: unknown law type '" + type + "'"};
}

ba_domain domain_of(const RunConfig& cfg) {
  return cfg.domain == "half" ? BA_DOMAIN_HALF_LINE : BA_DOMAIN_FULL_LINE_PALM;
}

void require_format(const RunConfig& cfg, const std::string& expected) {
  if (!cfg.format.empty() && cfg.format != expected) {
    throw UsageError{"format: command '" + cfg.command + "' writes " + expected + " only"};
  }
}

// Machine-readable output goes to --out (stdout when empty); the human
// summary goes to the other stream so pipes stay clean.
void deliver(const RunConfig& cfg, const std::string& machine, const std::string& summary) {
  if (cfg.out.empty()) {
    std::fputs(machine.c_str(), stdout);
    std::fputs(summary.c_str(), stderr);
  } else {
    std::ofstream out(cfg.out, std::ios::binary);
    if (!out) throw RuntimeError{"cannot write output file '" + cfg.out + "'"};
    out << machine;
    std::fputs(summary.c_str(), stdout);
  }
}

SystemPtr sample(const RunConfig& cfg, const ba_law* law, ba_domain domain) {
  ba_system* sys = nullptr;
  check(ba_system_sample(law, domain, cfg.n, cfg.seed, 0, &sys));
  return SystemPtr(sys, ba_system_free);
}

int cmd_simulate(const RunConfig& cfg) {
  require_format(cfg, "jsonl");
  LawSpec law = law_from_config(cfg);
  SystemPtr sys = sample(cfg, law.law.get(), domain_of(cfg));
  ba_outcome* raw = nullptr;
  check(ba_resolve(sys.get(), &raw));
  OutcomePtr outcome(raw, ba_outcome_free);

  const size_t n = ba_system_size(sys.get());
  const double* pos = ba_system_positions(sys.get());
  const double* vel = ba_system_speeds(sys.get());
  const double* death = ba_outcome_death_times(outcome.get());
  const int32_t* partner = ba_outcome_partners(outcome.get());
  const double* dpos = ba_outcome_death_positions(outcome.get());

  std::string lines;
  lines.reserve(n * 96);
  size_t survivors = 0;
  for (size_t i = 0; i < n; ++i) {
    lines += "{\"index\":" + fmt(static_cast<std::uint64_t>(i)) + ",\"x\":" + fmt(pos[i]) +
             ",\"v\":" + fmt(vel[i]);
    if (partner[i] < 0) {
      ++survivors;
      lines += ",\"fate\":\"alive\",\"partner\":null,\"t\":null,\"pos\":null}\n";
    } else {
      lines += ",\"fate\":\"annihilated\",\"partner\":" + fmt(static_cast<std::int64_t>(partner[i])) +
               ",\"t\":" + fmt(death[i]) + ",\"pos\":" + fmt(dpos[i]) + "}\n";
    }
  }
  const std::string summary = "simulate: " + fmt(static_cast<std::uint64_t>(n)) + " particles, " +
                              fmt(static_cast<std::uint64_t>(ba_outcome_collision_count(outcome.get()))) +
                              " collisions, " + fmt(static_cast<std::uint64_t>(survivors)) +
                              " survivors\n";
  deliver(cfg, lines, summary);
  return 0;
}

int cmd_density(const RunConfig& cfg) {
  require_format(cfg, "csv");
  if (cfg.times.empty()) throw UsageError{"times: required for 'density'"};
  LawSpec law = law_from_config(cfg);
  const std::vector<double> times = parse_times_spec(cfg.times);

  ba_density* raw = nullptr;
  check(ba_density_run(law.law.get(), cfg.n, times.data(), times.size(), cfg.replicas, cfg.seed, 0,
                       &raw));
  DensityPtr density(raw, ba_density_free);

  std::string csv = "t,class,estimate,stderr,replicas\n";
  const size_t n_cls = ba_density_num_classes(density.get());
  const double* ts = ba_density_times(density.get());
  for (size_t ti = 0; ti < ba_density_num_times(density.get()); ++ti) {
    for (size_t c = 0; c < n_cls; ++c) {
      double est = 0.0, se = 0.0;
      check(ba_density_estimate(density.get(), c, ti, &est, &se));
      csv += fmt(ts[ti]) + "," + fmt(ba_density_class_speed(density.get(), c)) + "," + fmt(est) +
             "," + fmt(se) + "," + fmt(static_cast<std::uint64_t>(cfg.replicas)) + "\n";
    }
  }
  const std::string summary =
      "density: " + fmt(static_cast<std::uint64_t>(n_cls)) + " classes x " +
      fmt(static_cast<std::uint64_t>(times.size())) + " times, window half-width " +
      fmt(ba_density_window_half_width(density.get())) + "\n";
  deliver(cfg, csv, summary);
  return 0;
}

int cmd_sweep(const RunConfig& cfg) {
  require_format(cfg, "csv");
  if (cfg.grid.empty()) throw UsageError{"grid: required for 'sweep'"};
  const std::vector<double> grid = parse_double_list(cfg.grid, "grid");

  ba_sweep* raw = nullptr;
  check(ba_sweep_run(grid.data(), grid.size(), cfg.n, cfg.horizon, cfg.replicas,
                     /*density_replicas=*/4, cfg.seed, 0, cfg.parallelism, &raw));
  SweepPtr sweep(raw, ba_sweep_free);

  std::string csv = "p,survival,ci_lo,ci_hi,exponent,exp_stderr\n";
  std::string summary = "sweep:";
  for (size_t g = 0; g < ba_sweep_size(sweep.get()); ++g) {
    double p = 0, surv = 0, lo = 0, hi = 0, expo = 0, ese = 0, rt = 0;
    check(ba_sweep_point(sweep.get(), g, &p, &surv, &lo, &hi, &expo, &ese, &rt));
    csv += fmt(p) + "," + fmt(surv) + "," + fmt(lo) + "," + fmt(hi) + "," + fmt(expo) + "," +
           fmt(ese) + "\n";
    summary += " p=" + fmt(p) + " survival=" + fmt(surv);
  }
  summary += "\n";
  deliver(cfg, csv, summary);
  return 0;
}

int cmd_explore(const RunConfig& cfg) {
  require_format(cfg, "csv");
  LawSpec law = law_from_config(cfg);
  // The walk is defined on the half-line; the domain flag is ignored here.
  ba_system* rsys = nullptr;
  check(ba_system_sample(law.law.get(), BA_DOMAIN_HALF_LINE, cfg.n, cfg.seed, 0, &rsys));
  SystemPtr sys(rsys, ba_system_free);

  ba_trace* rtrace = nullptr;
  check(ba_explore(sys.get(), cfg.max_steps == 0 ? cfg.n : cfg.max_steps, &rtrace));
  TracePtr trace(rtrace, ba_trace_free);

  const size_t steps = ba_trace_steps(trace.get());
  const uint32_t* loc = ba_trace_locations(trace.get());
  const int8_t* eps = ba_trace_eps(trace.get());
  const int8_t* epst = ba_trace_eps_tilde(trace.get());
  const int64_t* sums = ba_trace_partial_sums(trace.get());

  std::string csv = "step,location,next_location,eps,eps_tilde,partial_sum\n";
  for (size_t s = 0; s < steps; ++s) {
    csv += fmt(static_cast<std::uint64_t>(s)) + "," + fmt(static_cast<std::uint64_t>(loc[s])) + "," +
           fmt(static_cast<std::uint64_t>(loc[s + 1])) + "," + fmt(static_cast<std::int64_t>(eps[s])) +
           "," + fmt(static_cast<std::int64_t>(epst[s])) + "," + fmt(sums[s]) + "\n";
  }
  const std::string summary =
      "explore: " + fmt(static_cast<std::uint64_t>(steps)) + " steps, final balance " +
      (steps > 0 ? fmt(sums[steps - 1]) : "0") +
      (ba_trace_incomplete(trace.get()) != 0 ? ", incomplete\n" : "\n");
  deliver(cfg, csv, summary);
  return 0;
}

int cmd_oracle_check(const RunConfig& cfg) {
  // Mixed laws: the three-speed family plus a uniform interval.
  std::vector<LawPtr> laws;
  for (int i = 1; i <= 9; ++i) {
    ba_law* law = nullptr;
    check(ba_law_three_speed(i / 10.0, &law));
    laws.emplace_back(law, ba_law_free);
  }
  {
    ba_law* law = nullptr;
    check(ba_law_uniform(-1.0, 1.0, &law));
    laws.emplace_back(law, ba_law_free);
  }

  const uint64_t max_n = cfg.n < 2 ? 2 : cfg.n;
  uint64_t mismatches = 0;
  for (uint64_t i = 0; i < cfg.instances; ++i) {
    const ba_law* law = laws[i % laws.size()].get();
    const uint64_t size = 2 + i % (max_n - 1);
    const ba_domain domain = (i / laws.size()) % 2 == 0 ? BA_DOMAIN_HALF_LINE : BA_DOMAIN_FULL_LINE_PALM;
    ba_system* rsys = nullptr;
    check(ba_system_sample(law, domain, size, cfg.seed, i, &rsys));
    SystemPtr sys(rsys, ba_system_free);
    ba_outcome *rfast = nullptr, *roracle = nullptr;
    check(ba_resolve(sys.get(), &rfast));
    OutcomePtr fast(rfast, ba_outcome_free);
    check(ba_resolve_oracle(sys.get(), &roracle));
    OutcomePtr oracle(roracle, ba_outcome_free);

    const size_t n = ba_outcome_size(fast.get());
    const int32_t* pf = ba_outcome_partners(fast.get());
    const int32_t* po = ba_outcome_partners(oracle.get());
    const double* tf = ba_outcome_death_times(fast.get());
    const double* to = ba_outcome_death_times(oracle.get());
    bool ok = true;
    for (size_t k = 0; k < n; ++k) {
      if (pf[k] != po[k]) ok = false;
      else if (pf[k] >= 0 && std::abs(tf[k] - to[k]) > 1e-9 * std::max(1.0, std::abs(to[k]))) ok = false;
    }
    if (!ok) ++mismatches;
  }
  const std::string line = "oracle-check: " + fmt(cfg.instances) + " instances, " +
                           fmt(mismatches) + " mismatches\n";
  deliver(cfg, line, line);
  return mismatches == 0 ? 0 : 1;
}

int cmd_render(const RunConfig& cfg) {
  require_format(cfg, "svg");
  LawSpec law = law_from_config(cfg);
  SystemPtr sys = sample(cfg, law.law.get(), domain_of(cfg));
  ba_outcome* raw = nullptr;
  check(ba_resolve(sys.get(), &raw));
  OutcomePtr outcome(raw, ba_outcome_free);

  SvgOptions options;
  options.horizon = cfg.horizon;
  options.v_max = ba_law_v_max(law.law.get());
  options.discrete_three = !law.continuous;
  const size_t n = ba_system_size(sys.get());
  if (n > options.max_particles) {
    std::fprintf(stderr, "render: thinning %zu particles to at most %zu\n", n,
                 options.max_particles);
  }
  std::size_t drawn = 0;
  const std::string svg =
      render_svg(ba_system_positions(sys.get()), ba_system_speeds(sys.get()),
                 ba_outcome_death_times(outcome.get()), ba_outcome_death_positions(outcome.get()),
                 n, options, &drawn);
  const std::string summary = "render: " + fmt(static_cast<std::uint64_t>(drawn)) + " of " +
                              fmt(static_cast<std::uint64_t>(n)) + " trajectories\n";
  deliver(cfg, svg, summary);
  return 0;
}

int dispatch(const RunConfig& cfg) {
  if (cfg.command == "simulate") return cmd_simulate(cfg);
  if (cfg.command == "density") return cmd_density(cfg);
  if (cfg.command == "sweep") return cmd_sweep(cfg);
  if (cfg.command == "explore") return cmd_explore(cfg);
  if (cfg.command == "oracle-check") return cmd_oracle_check(cfg);
  if (cfg.command == "render") return cmd_render(cfg);
  throw UsageError{"unknown command '" + cfg.command + "'"};
}

}  // namespace

}  // namespace bcli

int main(int argc, char** argv) {
  try {
    const bcli::RunConfig cfg = bcli::parse_config(argc, argv);
    return bcli::dispatch(cfg);
  } catch (const bcli::UsageError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.message.c_str());
    return 2;
  } catch (const bcli::RuntimeError& e) {
    std::fprintf(stderr, "error: %s\n", e.message.c_str());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
