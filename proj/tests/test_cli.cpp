#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <string>
#include <unistd.h>
#include <vector>

#include "fastscan/cli.hpp"
#include "fastscan/io.hpp"

using namespace fastscan;
namespace fs = std::filesystem;

namespace {

int run_cli(std::vector<std::string> args) {
  std::vector<const char*> argv = {"fastscan"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return cli_main(static_cast<int>(argv.size()), argv.data());
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("fastscan_cli_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const {
    return (path / name).string();
  }
  static int& counter() {
    static int n = 0;
    return n;
  }
};

}  // namespace

TEST_CASE("gen + simulate produce the session files") {
  TempDir dir;
  CHECK(run_cli({"gen", "manifest", "--chunks", "10", "--jitter", "0",
                 "--duration", "1", "--startup", "1", "--out",
                 dir.file("m.json")}) == 0);
  CHECK(run_cli({"gen", "trace", "--model", "constant", "--length", "120",
                 "--mean", "3.0", "--out", dir.file("t.txt")}) == 0);
  CHECK(run_cli({"simulate", dir.file("m.json"), dir.file("t.txt"), "--algo",
                 "fastscan", "--out", dir.file("run")}) == 0);
  CHECK(fs::exists(dir.file("run.json")));
  CHECK(fs::exists(dir.file("run.csv")));
  const std::string csv = read_file(dir.file("run.csv"));
  CHECK(csv.rfind("index,level,bytes,start,end,deadline,stall_s", 0) == 0);
}

TEST_CASE("simulate exits 2 on a malformed trace, naming the line") {
  TempDir dir;
  REQUIRE(run_cli({"gen", "manifest", "--chunks", "4", "--out",
                   dir.file("m.json")}) == 0);
  write_file(dir.file("bad.txt"), "1.0\n-3\n");
  CHECK(run_cli({"simulate", dir.file("m.json"), dir.file("bad.txt"), "--out",
                 dir.file("run")}) == 2);
}

TEST_CASE("simulate exits 2 when beta violates the window condition") {
  TempDir dir;
  REQUIRE(run_cli({"gen", "manifest", "--chunks", "6", "--levels", "5",
                   "--out", dir.file("m.json")}) == 0);
  REQUIRE(run_cli({"gen", "trace", "--length", "60", "--mean", "2", "--out",
                   dir.file("t.txt")}) == 0);
  CHECK(run_cli({"simulate", dir.file("m.json"), dir.file("t.txt"), "--beta",
                 "0.5", "--window", "5", "--out", dir.file("run")}) == 2);
}

TEST_CASE("simulate exits 3 on a dead trace") {
  TempDir dir;
  REQUIRE(run_cli({"gen", "manifest", "--chunks", "4", "--duration", "1",
                   "--out", dir.file("m.json")}) == 0);
  write_file(dir.file("dead.txt"), "0.1\n0\n");
  CHECK(run_cli({"simulate", dir.file("m.json"), dir.file("dead.txt"),
                 "--algo", "rb", "--out", dir.file("run")}) == 3);
}

TEST_CASE("fixed seeds give byte-identical outputs end to end") {
  TempDir dir;
  auto pipeline = [&](const std::string& tag) {
    REQUIRE(run_cli({"gen", "manifest", "--chunks", "12", "--jitter", "20",
                     "--duration", "1", "--seed", "5", "--out",
                     dir.file(tag + "_m.json")}) == 0);
    REQUIRE(run_cli({"gen", "trace", "--model", "markov-2state", "--length",
                     "200", "--mean", "1.5", "--stddev", "1.0", "--seed", "5",
                     "--out", dir.file(tag + "_t.txt")}) == 0);
    REQUIRE(run_cli({"simulate", dir.file(tag + "_m.json"),
                     dir.file(tag + "_t.txt"), "--algo", "fastscan", "--out",
                     dir.file(tag + "_run")}) == 0);
  };
  pipeline("a");
  pipeline("b");
  CHECK(read_file(dir.file("a_m.json")) == read_file(dir.file("b_m.json")));
  CHECK(read_file(dir.file("a_t.txt")) == read_file(dir.file("b_t.txt")));
  CHECK(read_file(dir.file("a_run.json")) == read_file(dir.file("b_run.json")));
  CHECK(read_file(dir.file("a_run.csv")) == read_file(dir.file("b_run.csv")));
}

TEST_CASE("FASTSCAN_SEED overrides the flag") {
  TempDir dir;
  ::setenv("FASTSCAN_SEED", "99", 1);
  REQUIRE(run_cli({"gen", "trace", "--model", "ou", "--length", "50", "--seed",
                   "1", "--out", dir.file("env.txt")}) == 0);
  ::unsetenv("FASTSCAN_SEED");
  REQUIRE(run_cli({"gen", "trace", "--model", "ou", "--length", "50", "--seed",
                   "99", "--out", dir.file("flag.txt")}) == 0);
  REQUIRE(run_cli({"gen", "trace", "--model", "ou", "--length", "50", "--seed",
                   "1", "--out", dir.file("one.txt")}) == 0);
  CHECK(read_file(dir.file("env.txt")) == read_file(dir.file("flag.txt")));
  CHECK(read_file(dir.file("env.txt")) != read_file(dir.file("one.txt")));
}

TEST_CASE("compare runs a directory of traces") {
  TempDir dir;
  REQUIRE(run_cli({"gen", "manifest", "--chunks", "8", "--duration", "1",
                   "--out", dir.file("m.json")}) == 0);
  fs::create_directories(dir.file("traces"));
  REQUIRE(run_cli({"gen", "trace", "--length", "80", "--mean", "4", "--out",
                   dir.file("traces/a.txt")}) == 0);
  REQUIRE(run_cli({"gen", "trace", "--length", "80", "--mean", "1", "--out",
                   dir.file("traces/b.txt")}) == 0);
  CHECK(run_cli({"compare", dir.file("m.json"), dir.file("traces"), "--algos",
                 "fastscan,rb,bba", "--out", dir.file("cmp")}) == 0);
  CHECK(fs::exists(dir.file("cmp.json")));
  CHECK(fs::exists(dir.file("cmp.csv")));
}

TEST_CASE("compare exits 2 on an empty directory") {
  TempDir dir;
  REQUIRE(run_cli({"gen", "manifest", "--chunks", "4", "--out",
                   dir.file("m.json")}) == 0);
  fs::create_directories(dir.file("empty"));
  CHECK(run_cli({"compare", dir.file("m.json"), dir.file("empty"), "--out",
                 dir.file("cmp")}) == 2);
}

TEST_CASE("oracle-check agrees on a tiny CBR instance and guards big ones") {
  TempDir dir;
  REQUIRE(run_cli({"gen", "manifest", "--chunks", "4", "--levels", "2",
                   "--duration", "1", "--startup", "1", "--rates",
                   "0.5,1.0", "--out", dir.file("tiny.json")}) == 0);
  REQUIRE(run_cli({"gen", "trace", "--length", "60", "--mean", "1.2", "--out",
                   dir.file("t.txt")}) == 0);
  CHECK(run_cli({"oracle-check", dir.file("tiny.json"), dir.file("t.txt"),
                 "--buffer", "10"}) == 0);

  REQUIRE(run_cli({"gen", "manifest", "--chunks", "30", "--levels", "2",
                   "--duration", "1", "--out", dir.file("big.json")}) == 0);
  CHECK(run_cli({"oracle-check", dir.file("big.json"), dir.file("t.txt"),
                 "--buffer", "10"}) == 2);

  REQUIRE(run_cli({"gen", "manifest", "--chunks", "4", "--levels", "2",
                   "--duration", "1", "--jitter", "25", "--rates", "0.5,1.0",
                   "--out", dir.file("vbr.json")}) == 0);
  CHECK(run_cli({"oracle-check", dir.file("vbr.json"), dir.file("t.txt"),
                 "--buffer", "10"}) == 0);  // gap reported, still exit 0
}

TEST_CASE("unknown flags and algorithms exit 2") {
  TempDir dir;
  CHECK(run_cli({"simulate"}) == 2);
  REQUIRE(run_cli({"gen", "manifest", "--chunks", "4", "--out",
                   dir.file("m.json")}) == 0);
  REQUIRE(run_cli({"gen", "trace", "--length", "30", "--out",
                   dir.file("t.txt")}) == 0);
  CHECK(run_cli({"simulate", dir.file("m.json"), dir.file("t.txt"), "--algo",
                 "bola", "--out", dir.file("x")}) == 2);
}

TEST_CASE("missing inputs exit 2") {
  TempDir dir;
  CHECK(run_cli({"simulate", dir.file("nope.json"), dir.file("nope.txt"),
                 "--out", dir.file("x")}) == 2);
  REQUIRE(run_cli({"gen", "manifest", "--chunks", "4", "--out",
                   dir.file("m.json")}) == 0);
  CHECK(run_cli({"compare", dir.file("m.json"), dir.file("no_such_dir"),
                 "--out", dir.file("cmp")}) == 2);
}
