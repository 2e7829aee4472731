// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"

namespace {

std::string cli_path() {
  const char* env = std::getenv("BALLISTIC_CLI");
  REQUIRE_MESSAGE(env != nullptr, "BALLISTIC_CLI must point at the built binary");
  return env;
}

std::string golden_dir() {
  const char* env = std::getenv("BALLISTIC_GOLDEN");
  REQUIRE_MESSAGE(env != nullptr, "BALLISTIC_GOLDEN must point at tests/golden");
  return env;
}

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunResult run(const std::string& args) {
  static int counter = 0;
  const std::string out_path = "/tmp/bcli_out_" + std::to_string(counter);
  const std::string err_path = "/tmp/bcli_err_" + std::to_string(counter);
  ++counter;
  const std::string cmd = cli_path() + " " + args + " >" + out_path + " 2>" + err_path;
  const int raw = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WEXITSTATUS(raw);
  r.out = slurp(out_path);
  r.err = slurp(err_path);
  std::remove(out_path.c_str());
  std::remove(err_path.c_str());
  return r;
}

}  // namespace

TEST_CASE("help exits 0") {
  const RunResult r = run("--help");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("simulate") != std::string::npos);
}

TEST_CASE("usage errors exit 2 and name the offending key") {
  SUBCASE("conflicting law options") {
    const RunResult r = run("simulate --p 0.2 --law-file /tmp/nope.json --n 10 --seed 1");
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("--p") != std::string::npos);
    CHECK(r.err.find("--law-file") != std::string::npos);
  }
  SUBCASE("missing command") {
    const RunResult r = run("--n 10");
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("command") != std::string::npos);
  }
  SUBCASE("unknown command") {
    const RunResult r = run("frobnicate");
    CHECK(r.exit_code == 2);
  }
  SUBCASE("unknown config key is rejected by name") {
    std::ofstream("/tmp/bcli_bad.json") << "{\"command\":\"simulate\",\"bogus_key\":3}\n";
    const RunResult r = run("--config /tmp/bcli_bad.json");
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("bogus_key") != std::string::npos);
  }
  SUBCASE("missing required times for density") {
    const RunResult r = run("density --p 0.3 --n 100 --seed 1");
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("times") != std::string::npos);
  }
  SUBCASE("bad p range") {
    const RunResult r = run("simulate --p 1.5 --n 10 --seed 1");
    CHECK(r.exit_code == 2);
  }
}

TEST_CASE("runtime errors exit 1") {
  // a time far beyond the light-cone-safe window
  const RunResult r = run("density --p 0.3 --n 50 --times 100000 --replicas 2 --seed 1");
  CHECK(r.exit_code == 1);
  CHECK(r.err.find("window") != std::string::npos);
}

TEST_CASE("config round trip is byte-stable") {
  const RunResult first = run(
      "simulate --p 0.25 --n 50 --seed 7 --emit-config /tmp/bcli_cfg_a.json --out /tmp/bcli_sim_a.jsonl");
  REQUIRE(first.exit_code == 0);
  const std::string run_a = slurp("/tmp/bcli_sim_a.jsonl");
  // replaying the emitted config reproduces both the config and the output
  const RunResult second = run("--config /tmp/bcli_cfg_a.json --emit-config /tmp/bcli_cfg_b.json");
  REQUIRE(second.exit_code == 0);
  CHECK(slurp("/tmp/bcli_cfg_a.json") == slurp("/tmp/bcli_cfg_b.json"));
  CHECK(slurp("/tmp/bcli_sim_a.jsonl") == run_a);
}

TEST_CASE("simulate writes one JSONL record per particle, deterministically") {
  const RunResult a = run("simulate --p 0.25 --n 20 --seed 9 --out /tmp/bcli_sim1.jsonl");
  const RunResult b = run("simulate --p 0.25 --n 20 --seed 9 --out /tmp/bcli_sim2.jsonl");
  REQUIRE(a.exit_code == 0);
  REQUIRE(b.exit_code == 0);
  const std::string lines = slurp("/tmp/bcli_sim1.jsonl");
  CHECK(lines == slurp("/tmp/bcli_sim2.jsonl"));
  std::size_t count = 0;
  for (char c : lines) count += c == '\n' ? 1 : 0;
  CHECK(count == 41);  // 2n + 1 particles on the full line
  CHECK(lines.find("\"fate\":\"annihilated\"") != std::string::npos);
  CHECK(a.out.find("simulate:") != std::string::npos);  // human summary on stdout when --out set
}

TEST_CASE("density CSV schema") {
  const RunResult r = run("density --p 0.4 --n 500 --times 1,5 --replicas 3 --seed 2");
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.rfind("t,class,estimate,stderr,replicas\n", 0) == 0);
}

TEST_CASE("explore CSV schema") {
  const RunResult r = run("explore --p 0.4 --n 50 --seed 4");
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.rfind("step,location,next_location,eps,eps_tilde,partial_sum\n", 0) == 0);
}

TEST_CASE("oracle-check exits 0 on matching resolvers") {
  const RunResult r = run("oracle-check --n 12 --instances 200 --seed 3");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("0 mismatches") != std::string::npos);
}

TEST_CASE("sweep CSV is independent of parallelism") {
  const std::string common = "sweep --grid 0.2,0.45 --n 800 --horizon 30 --replicas 16 --seed 5";
  const RunResult a = run(common + " --parallelism 1 --out /tmp/bcli_sweep1.csv");
  const RunResult b = run(common + " --parallelism 2 --out /tmp/bcli_sweep2.csv");
  REQUIRE(a.exit_code == 0);
  REQUIRE(b.exit_code == 0);
  const std::string csv = slurp("/tmp/bcli_sweep1.csv");
  CHECK(csv == slurp("/tmp/bcli_sweep2.csv"));
  CHECK(csv.rfind("p,survival,ci_lo,ci_hi,exponent,exp_stderr\n", 0) == 0);
}

TEST_CASE("render matches the frozen seed-3 snapshot byte for byte") {
  const RunResult r = run("render --p 0.25 --n 40 --seed 3 --out /tmp/bcli_render.svg");
  REQUIRE(r.exit_code == 0);
  const std::string svg = slurp("/tmp/bcli_render.svg");
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  const std::string golden = slurp(golden_dir() + "/render_seed3.svg");
  REQUIRE_MESSAGE(!golden.empty(), "golden snapshot missing");
  CHECK(svg == golden);
}
