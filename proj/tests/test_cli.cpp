#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#ifndef CLI_BINARY_PATH
#error "CLI_BINARY_PATH must be defined by the build"
#endif

namespace {

struct RunResult {
  int exit_code;
  std::string stdout_text;
};

RunResult run_cli(const std::string& args, const std::string& env = "") {
  const std::string cmd =
      env + (env.empty() ? "" : " ") + CLI_BINARY_PATH + " " + args +
      " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  std::array<char, 4096> buf;
  std::size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0)
    out.append(buf.data(), got);
  const int status = pclose(pipe);
  return {WEXITSTATUS(status), out};
}

void check_schema(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line ==
        "experiment,n,beta,t,metric,bound_type,value,mc_estimate,mc_stderr,"
        "replicas,seed");
  while (std::getline(in, line)) {
    int commas = 0;
    for (char c : line) commas += c == ',';
    CHECK(commas == 10);
  }
}

}  // namespace

TEST_CASE("ou-curves: success, schema, determinism") {
  const std::string args =
      "ou-curves --n 50 --z0-norm2-over-n 1 --metric hellinger "
      "--t-grid 0.5:6:12 --seed 7";
  RunResult a = run_cli(args);
  REQUIRE(a.exit_code == 0);
  check_schema(a.stdout_text);
  CHECK(a.stdout_text.find("hellinger") != std::string::npos);
  RunResult b = run_cli(args);
  CHECK(a.stdout_text == b.stdout_text);
}

TEST_CASE("dou-sim: excluded beta regime exits 2 with a message") {
  RunResult r = run_cli("dou-sim --beta 0.5 --n 4 --replicas 2 "
                        "--t-grid 0.5:1:2");
  CHECK(r.exit_code == 2);
}

TEST_CASE("unknown flags and missing subcommand are config errors") {
  CHECK(run_cli("ou-curves --no-such-flag 1").exit_code == 2);
  CHECK(run_cli("").exit_code == 2);
  CHECK(run_cli("ou-curves --metric nonsense").exit_code == 2);
}

TEST_CASE("help exits 0") {
  CHECK(run_cli("--help").exit_code == 0);
  CHECK(run_cli("ou-curves --help").exit_code == 0);
}

TEST_CASE("dou-sim: runs, deterministic, thread-invariant") {
  const std::string args =
      "dou-sim --n 6 --beta 2 --replicas 8 --dt 0.01 --t-grid 0.25,0.75 "
      "--seed 3";
  RunResult a = run_cli(args);
  REQUIRE(a.exit_code == 0);
  check_schema(a.stdout_text);
  RunResult b = run_cli(args, "CUTOFFLAB_THREADS=4");
  CHECK(b.exit_code == 0);
  CHECK(a.stdout_text == b.stdout_text);
}

TEST_CASE("ou-profile: erf TV profile") {
  RunResult r = run_cli("ou-profile --metric tv --a inf --b-grid -1,0,1");
  REQUIRE(r.exit_code == 0);
  check_schema(r.stdout_text);
  CHECK(r.stdout_text.find("tv") != std::string::npos);
}

TEST_CASE("equilibrium-check and matrix-check run") {
  RunResult eq =
      run_cli("equilibrium-check --n 16 --beta 2 --replicas 500 --seed 1");
  CHECK(eq.exit_code == 0);
  check_schema(eq.stdout_text);
  RunResult mx = run_cli(
      "matrix-check --n 4 --beta 2 --replicas 50 --t-grid 0.5,1 --seed 1");
  CHECK(mx.exit_code == 0);
  check_schema(mx.stdout_text);
  CHECK(run_cli("matrix-check --beta 4").exit_code == 2);
}

TEST_CASE("coupling subcommand: all three modes") {
  RunResult par = run_cli(
      "coupling --mode parallel --n 4 --beta 2 --replicas 4 --dt 0.01 "
      "--t-grid 0.5,1 --seed 2");
  CHECK(par.exit_code == 0);
  check_schema(par.stdout_text);
  RunResult mer = run_cli(
      "coupling --mode merge --n 4 --beta 2 --replicas 4 --dt 0.01 "
      "--t-grid 1:4:4 --seed 2");
  CHECK(mer.exit_code == 0);
  check_schema(mer.stdout_text);
  RunResult tail = run_cli(
      "coupling --mode tail --n 4 --beta 2 --replicas 20 --dt 0.01 --a 0.5 "
      "--u-grid 4,25 --t-grid 1:6:6 --seed 2");
  CHECK(tail.exit_code == 0);
  check_schema(tail.stdout_text);
  CHECK(run_cli("coupling --mode bogus --n 4").exit_code == 2);
}

TEST_CASE("cutoff-sweep and figures") {
  RunResult sw = run_cli(
      "cutoff-sweep --n-list 16 --beta-list 0,2 --t-grid 1,2,3 --seed 5");
  CHECK(sw.exit_code == 0);
  check_schema(sw.stdout_text);
  RunResult fg = run_cli("figures --t-grid 0.5:4:8 --dt 0.01");
  CHECK(fg.exit_code == 0);
  check_schema(fg.stdout_text);
}

TEST_CASE("config file: flat key=value with flag precedence") {
  const std::string cfg_path = "cli_test_config.ini";
  {
    std::ofstream cfg(cfg_path);
    cfg << "n=10\nmetric=kullback\nt-grid=1,2\n";
  }
  RunResult from_cfg = run_cli("ou-curves --config " + cfg_path);
  REQUIRE(from_cfg.exit_code == 0);
  CHECK(from_cfg.stdout_text.find("kullback") != std::string::npos);
  CHECK(from_cfg.stdout_text.find(",10,") != std::string::npos);
  // flags win over the config file
  RunResult flag_wins =
      run_cli("ou-curves --metric hellinger --config " + cfg_path);
  REQUIRE(flag_wins.exit_code == 0);
  CHECK(flag_wins.stdout_text.find("hellinger") != std::string::npos);
  CHECK(flag_wins.stdout_text.find("kullback") == std::string::npos);
  std::filesystem::remove(cfg_path);
}

TEST_CASE("--out writes the same bytes as stdout") {
  const std::string out_path = "cli_test_out.csv";
  RunResult direct =
      run_cli("ou-curves --n 12 --metric chi2 --t-grid 0.5:3:6");
  REQUIRE(direct.exit_code == 0);
  RunResult filed = run_cli(
      "ou-curves --n 12 --metric chi2 --t-grid 0.5:3:6 --out " + out_path);
  REQUIRE(filed.exit_code == 0);
  std::ifstream in(out_path, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  CHECK(buf.str() == direct.stdout_text);
  std::filesystem::remove(out_path);
}
