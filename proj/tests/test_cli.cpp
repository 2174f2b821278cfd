#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "kmdesign/cli.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using kmdesign::cli::run;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run call(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  explicit TempDir(const char* name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const char* f) const { return (path / f).string(); }
};

}  // namespace

TEST_CASE("params") {
  const auto r = call({"params", "--t", "2", "--v", "55", "--k", "10", "--lambda", "4"});
  CHECK(r.code == 0);
  CHECK(r.out.find("lambda_min=1\n") != std::string::npos);
  CHECK(r.out.find("lambda_max=886322710\n") != std::string::npos);
  CHECK(r.out.find("M=443161355\n") != std::string::npos);
  CHECK(r.out.find("b=132\n") != std::string::npos);

  const auto fisher = call({"params", "--t", "2", "--v", "55", "--k", "10", "--lambda", "1"});
  CHECK(fisher.code == 1);
  CHECK(fisher.out.find("fisher=violated") != std::string::npos);
  CHECK(call({"params", "--t", "3", "--v", "20", "--k", "5", "--lambda", "3"}).code == 1);
}

TEST_CASE("usage errors") {
  CHECK(call({}).code == 2);
  const auto unknown = call({"frobnicate"});
  CHECK(unknown.code == 2);
  CHECK(unknown.err.find("frobnicate") != std::string::npos);
  CHECK(call({"params", "--t", "2"}).code == 2);
  CHECK(call({"params", "--t", "x", "--v", "5", "--k", "3", "--lambda", "1"}).code == 2);
  CHECK(call({"params", "--t", "4", "--v", "5", "--k", "3", "--lambda", "1"}).code == 2);
  const auto missing = call({"verify", "--design", "/nonexistent/d.dsg"});
  CHECK(missing.code == 2);
  CHECK(missing.err.find("/nonexistent/d.dsg") != std::string::npos);
  CHECK(call({"--help"}).code == 0);
}

TEST_CASE("empty design verifies with lambda 0") {
  TempDir dir("kmdesign_cli_empty");
  std::ofstream(dir / "empty.dsg") << "design t=3 v=10 k=4 lambda=0 b=0\n";
  const auto r = call({"verify", "--design", dir / "empty.dsg", "--t", "3"});
  CHECK(r.code == 0);
  CHECK(r.out.find("lambda=0") != std::string::npos);
}

TEST_CASE("step by step") {
  TempDir dir("kmdesign_cli_steps");
  const std::string grp = oracle::fixture("g_z3s3.grp");
  REQUIRE(call({"orbits", "--group", grp, "--k", "5", "--out", dir / "k5.orb"}).code == 0);
  REQUIRE(call({"matrix", "--group", grp, "--t", "4", "--k", "5", "--out", dir / "a.km"}).code == 0);
  const auto solved = call({"solve", "--matrix", dir / "a.km", "--lambda", "2", "--group", grp, "--out", dir / "a.sol"});
  REQUIRE(solved.code == 0);
  CHECK(slurp(dir / "a.sol").find("count=12 status=complete") != std::string::npos);
  REQUIRE(call({"expand", "--group", grp, "--matrix", dir / "a.km", "--solutions", dir / "a.sol", "--index", "3", "--t", "4",
                "--out", dir / "d.dsg"})
              .code == 0);
  const auto v = call({"verify", "--design", dir / "d.dsg"});
  CHECK(v.code == 0);
  CHECK(v.out.find("lambda=2") != std::string::npos);

  REQUIRE(call({"supplement", "--design", dir / "d.dsg", "--out", dir / "s.dsg"}).code == 0);
  CHECK(call({"verify", "--design", dir / "s.dsg", "--t", "4"}).out.find("lambda=9") != std::string::npos);
  REQUIRE(call({"complement", "--design", dir / "d.dsg", "--out", dir / "c.dsg"}).code == 0);
  CHECK(call({"verify", "--design", dir / "c.dsg", "--t", "4"}).code == 0);
  CHECK(call({"union", "--design", dir / "d.dsg", "--design", dir / "s.dsg", "--out", dir / "u.dsg"}).code == 0);
  CHECK(call({"verify", "--design", dir / "u.dsg", "--t", "4"}).out.find("lambda=11") != std::string::npos);
  CHECK(call({"union", "--design", dir / "d.dsg", "--design", dir / "d.dsg"}).code == 1);

  const auto fp = call({"fingerprint", "--design", dir / "d.dsg"});
  CHECK(fp.code == 0);
  CHECK(fp.out.rfind("v=15 k=5 b=546\n", 0) == 0);

  const auto budget = call({"autorder", "--design", dir / "d.dsg", "--budget-nodes", "1"});
  CHECK(budget.code == 3);
  CHECK(budget.out.find("order>=") != std::string::npos);

  const auto tight = call({"solve", "--matrix", dir / "a.km", "--lambda", "2", "--budget-seconds", "0"});
  CHECK(tight.code == 3);
  CHECK(call({"solve", "--matrix", dir / "a.km", "--lambda", "12", "--mode", "first"}).code == 1);
}

TEST_CASE("expand from base blocks") {
  TempDir dir("kmdesign_cli_expand");
  const auto r = call({"expand", "--group", oracle::fixture("g_d38.grp"), "--blocks", oracle::fixture("t1_blocks_a.blk"), "--out",
                       dir / "t1.dsg"});
  CHECK(r.code == 0);
  CHECK(slurp(dir / "t1.dsg").rfind("design t=3 v=20 k=5 lambda=4 b=456\n", 0) == 0);
}

TEST_CASE("pipeline is reproducible across worker counts") {
  TempDir one("kmdesign_cli_p1"), many("kmdesign_cli_p4");
  const std::string grp = oracle::fixture("g_z3s3.grp");
  const auto a = call({"pipeline", "--group", grp, "--t", "4", "--k", "5", "--lambda", "2", "--out", one.path.string()});
  const auto b = call({"pipeline", "--group", grp, "--t", "4", "--k", "5", "--lambda", "2", "--workers", "4", "--out",
                       many.path.string()});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.find("solutions 12\n") != std::string::npos);
  CHECK(a.out.find("lambda=2") != std::string::npos);
  for (const char* f : {"g_z3s3.orb", "g_z3s3.km", "g_z3s3.sol", "g_z3s3.dsg"}) {
    CAPTURE(f);
    CHECK(slurp(one / f) == slurp(many / f));
    CHECK_FALSE(slurp(one / f).empty());
  }
  const auto counted = call({"pipeline", "--group", grp, "--t", "4", "--k", "5", "--lambda", "2", "--count"});
  CHECK(counted.code == 0);
  CHECK(counted.out.find("solutions 12\n") != std::string::npos);
  CHECK(counted.out.find("verified t=4 lambda=2") != std::string::npos);
}
