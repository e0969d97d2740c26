#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"

namespace {

struct RunResult {
  int code = -1;
  std::string output;
};

RunResult run_once(const std::string& args, const std::string& env = "") {
  std::string cmd = env + " " + std::string(QF_BIN) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult r;
  char buf[4096];
  size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.output.append(buf, got);
  int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

// every command is run twice; the tool must be deterministic
RunResult run(const std::string& args, const std::string& env = "") {
  RunResult first = run_once(args, env);
  RunResult second = run_once(args, env);
  CHECK(first.code == second.code);
  CHECK(first.output == second.output);
  return first;
}

std::string fix(const char* name) {
  return std::string(QF_FIXTURES) + "/" + name;
}

bool contains(const RunResult& r, const std::string& needle) {
  return r.output.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("decompose") {
  RunResult joint =
      run("decompose --manifold " + fix("m1_quarter.json") + " --poly z1^3");
  CHECK(joint.code == 0);
  CHECK(contains(joint, "A_1 = 5/7*z1 - 2/7*Z1"));
  CHECK(contains(joint, "certificate:"));

  RunResult single = run("decompose --manifold " + fix("m1_quarter.json") +
                         " --poly z1^3 --l 1");
  CHECK(single.code == 0);
  CHECK(contains(single, "A = 5/7*z1 - 2/7*Z1"));
  CHECK(contains(single, "C = "));
}

TEST_CASE("chain membership exit codes") {
  std::string base = "chain --manifold " + fix("m1_quarter.json") +
                     " --poly \"z1^2 + Z1^2\" --l 1 --flavor g";
  RunResult plain = run(base);
  CHECK(plain.code == 0);
  CHECK(contains(plain, "rung 1:"));

  RunResult member = run(base + " --exclude z1^2");
  CHECK(member.code == 0);
  CHECK(contains(member, "member"));

  RunResult blocked = run(base + " --exclude z1");
  CHECK(blocked.code == 1);
  CHECK(contains(blocked, "NOT a member"));
}

TEST_CASE("kernel") {
  RunResult r =
      run("kernel --manifold " + fix("m1_quarter.json") + " --degree 2");
  CHECK(r.code == 0);
  CHECK(contains(r, "dimension: 2"));
}

TEST_CASE("dump-system") {
  RunResult r = run("dump-system --manifold " + fix("m1_quarter.json") +
                    " --target z1^3");
  CHECK(r.code == 0);
  CHECK(contains(r, "naive uniform count"));

  RunResult bad = run("dump-system --manifold " + fix("m1_quarter.json") +
                      " --target \"z1 + z1^2\"");
  CHECK(bad.code == 2);
  CHECK(contains(bad, "error:"));
}

TEST_CASE("audit-invertibility") {
  RunResult good = run("audit-invertibility --manifold " +
                       fix("m1_quarter.json") + " --degree 3");
  CHECK(good.code == 0);
  CHECK(contains(good, "total det+ = 9/100"));
  CHECK(contains(good, "total det- = 1/36"));

  RunResult edge = run("audit-invertibility --manifold " +
                       fix("m1_half.json") + " --degree 3");
  CHECK(edge.code == 1);
  CHECK(contains(edge, "degenerate correction system"));
}

TEST_CASE("verify") {
  RunResult ok = run("verify --manifold " + fix("m1_quarter.json") +
                     " --target " + fix("m1_quarter.json") +
                     " --map standard --degree 5");
  CHECK(ok.code == 0);
  CHECK(contains(ok, "mapping equation: holds"));

  RunResult mismatch = run("verify --manifold " + fix("m1_quarter.json") +
                           " --target " + fix("m1_third.json") +
                           " --map standard --degree 5");
  CHECK(mismatch.code == 1);
  CHECK(contains(mismatch, "mapping equation: FAILS"));

  RunResult vertical = run("verify --manifold " + fix("m1_tilde.json") +
                           " --target " + fix("m1_model_d5.json") + " --map " +
                           fix("map_vertical.json") + " --degree 5");
  CHECK(vertical.code == 0);
  CHECK(contains(vertical, "mapping equation: holds"));
}

TEST_CASE("normalize") {
  RunResult ok = run("normalize --manifold " + fix("m1_quarter.json") +
                     " --target " + fix("m1_quarter.json") + " --map " +
                     fix("map_twisted.json") + " --degree 5");
  CHECK(ok.code == 0);
  CHECK(contains(ok, "stage rescaling"));
  CHECK(contains(ok, "normalized map:"));

  RunResult planted = run("normalize --manifold " + fix("m1_quarter.json") +
                          " --target " + fix("m1_third.json") +
                          " --map standard --degree 5");
  CHECK(planted.code == 1);
  CHECK(contains(planted, "weight mismatch at component 1"));
}

TEST_CASE("theorem-a") {
  RunResult r = run("theorem-a --manifold " + fix("m1_quarter.json") +
                    " --target " + fix("m1_quarter.json") +
                    " --map standard --degree 5");
  CHECK(r.code == 0);
  CHECK(contains(r, "normal form equals the standard embedding"));
}

TEST_CASE("theorem-b") {
  RunResult r = run(
      "theorem-b --src-tilde " + fix("m1_tilde.json") + " --src-model " +
      fix("m1_model_d5.json") + " --dst-tilde " + fix("m1_tilde.json") +
      " --dst-model " + fix("m1_model_d5.json") + " --top " +
      fix("map_identity_11.json") + " --left " + fix("map_vertical.json") +
      " --right " + fix("map_vertical.json") + " --degree 5");
  CHECK(r.code == 0);
  CHECK(contains(r, "verdict: square is coherent"));
  CHECK(contains(r, "component 1: 1/4 = 1/4 = 1/4 = 1/4"));
}

TEST_CASE("report files match stdout") {
  std::string dir = "/tmp/qf_cli_report_test";
  std::string scrub = "rm -rf " + dir + " && mkdir -p " + dir;
  REQUIRE(std::system(scrub.c_str()) == 0);
  RunResult r = run("audit-invertibility --manifold " +
                        fix("m1_quarter.json") +
                        " --degree 3 --report audit.txt",
                    "QF_REPORT_DIR=" + dir);
  CHECK(r.code == 0);
  std::ifstream in(dir + "/audit.txt", std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == r.output);
}

TEST_CASE("error handling") {
  RunResult missing = run("kernel --manifold /nonexistent.json --degree 2");
  CHECK(missing.code == 2);
  CHECK(contains(missing, "error:"));

  RunResult badpoly = run("decompose --manifold " + fix("m1_quarter.json") +
                          " --poly \"z1 + @\"");
  CHECK(badpoly.code == 2);
  CHECK(contains(badpoly, "error:"));
  CHECK(contains(badpoly, "line 1"));

  RunResult badindex = run("decompose --manifold " + fix("m1_quarter.json") +
                           " --poly z1^2 --l 7");
  CHECK(badindex.code == 2);
}
