#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "doctest.h"
#include "specflow/cli.hpp"

using namespace specflow;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
  auto d = fs::temp_directory_path() / ("specflow_cli_test_" + std::to_string(::getpid()));
  fs::create_directories(d);
  return d;
}

fs::path write_config(const std::string& name, const std::string& text) {
  auto p = scratch_dir() / name;
  std::ofstream(p) << text;
  return p;
}

int run_binary(const std::string& args, std::string* out = nullptr) {
  const std::string cmd = std::string(SPECFLOW_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = ::popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string text;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) text.append(buf, n);
  const int status = ::pclose(pipe);
  if (out) *out = text;
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_in_process(std::vector<std::string> args) {
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return cli::run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace

TEST_CASE("check-props on Example 1") {
  auto cfg = config::parse_config(R"({"alpha": "sqrt2m1", "roof": "example1"})");
  auto rep = cli::execute("check-props", cfg);
  CHECK(rep.summary["p1"] == "holds");
  CHECK(rep.summary["p2"] == "holds");
  CHECK(rep.summary["weak_mixing"] == true);
  CHECK(rep.exit_code == 0);

  auto bad = config::parse_config(R"({"alpha": "golden", "roof": "p1_fail_orbit"})");
  auto rb = cli::execute("check-props", bad);
  CHECK(rb.summary["p1"] == "fails");
  CHECK(rb.exit_code == 0);
}

TEST_CASE("config validation") {
  CHECK_THROWS_AS(config::parse_config("{not json"), Error);
  CHECK_THROWS_AS(config::parse_config(R"({"alpha": "golden", "bogus": 1})"), Error);
  auto cfg = config::parse_config(R"({"alpha": "golden", "roof": "example1", "params": {"grid": 100}})");
  try {
    cli::execute("coboundary", cfg);
    FAIL("expected InvalidArgument");
  } catch (const Error& e) {
    CHECK(cli::exit_code_for(e.kind()) == 2);
  }
  auto no_seed = config::parse_config(R"({"alpha": "golden", "roof": "example1", "params": {"pairs": 2}})");
  try {
    cli::execute("ratner-witness", no_seed);
    FAIL("expected InvalidArgument");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidArgument);
  }
  CHECK(cli::exit_code_for(ErrorKind::Precondition) == 3);
  CHECK(cli::exit_code_for(ErrorKind::NoReturn) == 3);
  CHECK(cli::exit_code_for(ErrorKind::AssertionFailed) == 1);
}

TEST_CASE("exit codes through run") {
  auto malformed = write_config("malformed.json", "{\"alpha\": ");
  CHECK(run_in_process({"specflow", "check-props", "--config", malformed.string()}) == 2);
  auto p1fail = write_config("p1fail.json", R"({"alpha": "golden", "roof": "p1_fail_orbit", "seed": 1,
    "params": {"pairs": 2}})");
  CHECK(run_in_process({"specflow", "ratner-witness", "--config", p1fail.string()}) == 3);
  auto strict = write_config("strict.json", R"({"alpha": "golden", "roof": "example1",
    "params": {"zeta": [{"n": 1, "re": 0.5, "im": 0}, {"n": -1, "re": 0.5, "im": 0}],
               "n_modes": 1, "grid": 100, "tolerance": 1e-30}})");
  CHECK(run_in_process({"specflow", "coboundary", "--config", strict.string()}) == 1);
}

TEST_CASE("binary exit codes and deterministic reports") {
  auto malformed = write_config("malformed2.json", "[1, 2");
  CHECK(run_binary("check-props --config " + malformed.string()) == 2);
  CHECK(run_binary("no-such-subcommand --config " + malformed.string()) == 2);
  auto p1fail = write_config("p1fail2.json", R"({"alpha": "golden", "roof": "p1_fail_orbit", "seed": 1,
    "params": {"pairs": 2}})");
  CHECK(run_binary("ratner-witness --config " + p1fail.string()) == 3);

  auto good = write_config("witness.json", R"({"alpha": "golden", "roof": "example1", "seed": 9,
    "params": {"pairs": 3}})");
  auto d1 = scratch_dir() / "run1", d2 = scratch_dir() / "run2";
  std::string stdout1;
  CHECK(run_binary("ratner-witness --config " + good.string() + " --out " + d1.string(), &stdout1) == 0);
  CHECK(run_binary("ratner-witness --config " + good.string() + " --out " + d2.string()) == 0);
  CHECK(slurp(d1 / "report.json") == slurp(d2 / "report.json"));
  CHECK(slurp(d1 / "report.csv") == slurp(d2 / "report.csv"));
  auto parsed = config::json::parse(slurp(d1 / "report.json"));
  CHECK(parsed["subcommand"] == "ratner-witness");
  CHECK(config::json::parse(stdout1) == parsed);

  std::string other;
  CHECK(run_binary("ratner-witness --config " + good.string() + " --seed 10", &other) == 0);
  CHECK(config::json::parse(other) != parsed);

  std::string csv;
  CHECK(run_binary("check-props --format csv --config " + good.string(), &csv) == 0);
  CHECK(csv.find("p1,holds") != std::string::npos);
  fs::remove_all(scratch_dir());
}
