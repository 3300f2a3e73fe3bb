#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sys/wait.h>
#include <unistd.h>

#include "json.hpp"

namespace {

namespace fs = std::filesystem;

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(RVA_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  std::string out;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("rva_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string file(const std::string& name, const std::string& content) {
    const auto p = dir_ / name;
    std::ofstream(p) << content;
    return p.string();
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string compile(const std::string& name, const std::string& formula, const std::string& free) {
    const auto out = path(name + ".rva");
    const auto r = run("compile -f " + file(name + ".f", formula) + " --base 2 --free " + free + " -o " + out);
    EXPECT_EQ(r.code, 0) << formula;
    return out;
  }

  fs::path dir_;
};

TEST_F(Cli, EvalSentence) {
  const auto r = run("eval -f " + file("s.f", "A x. E y. x = y + y") + " --base 2");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "true\n");
}

TEST_F(Cli, EvalWithBoundRelation) {
  const auto z = compile("z", "int(x)", "x");
  const auto r = run("eval -f " + file("s.f", "A x. (X(x) -> int(x))") + " --base 2 --rel X=" + z);
  EXPECT_EQ(r.out, "true\n");
}

TEST_F(Cli, Member) {
  const auto half = compile("half", "x < 1/2", "x");
  EXPECT_EQ(run("member --rel " + half + " --point 1/4").out, "true\n");
  EXPECT_EQ(run("member --rel " + half + " --point 3/4").out, "false\n");
  EXPECT_EQ(run("member --rel " + half + " --point 1,2").code, 2);
}

TEST_F(Cli, CheckIntegersIsNotSDefinable) {
  const auto z = compile("z", "int(x)", "x");
  const auto r = run("check --rel " + z + " --target s");
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("FS fails for I={1}"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("witness: "), std::string::npos);
  const auto l = run("check --rel " + z + " --target l");
  EXPECT_EQ(l.code, 0);
  EXPECT_NE(l.out.find("IP holds"), std::string::npos) << l.out;
}

TEST_F(Cli, CheckJsonSchema) {
  const auto z = compile("z", "int(x)", "x");
  const auto r = run("check --rel " + z + " --target s --json");
  EXPECT_EQ(r.code, 1);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["verdict"], "NotDefinable");
  EXPECT_EQ(j["failing_tag"], "FSP");
  EXPECT_TRUE(j["witness"].contains("point"));
  EXPECT_TRUE(j["stage_sizes"].is_array());
  // Byte-identical output on a rerun.
  EXPECT_EQ(run("check --rel " + z + " --target s --json").out, r.out);
}

TEST_F(Cli, WitnessAndStats) {
  const auto half = compile("h", "x + x = 1", "x");
  const auto w = run("witness --rel " + half);
  EXPECT_NE(w.out.find("point: 1/2"), std::string::npos) << w.out;
  const auto s = run("stats --rel " + half);
  EXPECT_NE(s.out.find("kind: wdba"), std::string::npos);
  EXPECT_NE(s.out.find("saturated: yes"), std::string::npos);
  const auto e = compile("e", "x < x", "x");
  EXPECT_EQ(run("witness --rel " + e).out, "empty\n");
}

TEST_F(Cli, Oracle) {
  const auto sq = file("sq.ps", "polyset 1\narity 2\npiece\n ineq 1 0 >= 0\n ineq 1 0 <= 1\n ineq 0 1 >= 0\n ineq 0 1 <= 1\n");
  const auto r = run("oracle --polyset " + sq);
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("singular: 4 point(s)"), std::string::npos) << r.out;
  const auto at = run("oracle --polyset " + sq + " --at 1/2,0");
  EXPECT_NE(at.out.find("dimension 1"), std::string::npos) << at.out;
}

TEST_F(Cli, UsageAndInputErrorsExitTwo) {
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
  EXPECT_EQ(run("member --rel " + path("missing.rva") + " --point 1").code, 2);
  EXPECT_EQ(run("eval -f " + file("bad.f", "x <") + " --base 2").code, 2);
  EXPECT_EQ(run("check --rel " + file("bad.rva", "rva 1\nbase 2\n") + " --target s").code, 2);
}

TEST_F(Cli, EngineLimitExitsTwo) {
  const auto f = file("big.f", "E y. E z. (x = y + z & int(y) & int(z + z + z) & y < 5*z + 1/3)");
  const auto r = run("--max-states 3 compile -f " + f + " --base 2 --free x -o " + path("big.rva"));
  EXPECT_EQ(r.code, 2);
}

}  // namespace
