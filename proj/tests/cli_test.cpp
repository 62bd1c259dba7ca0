#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
  const std::string cmd = std::string(MULTIFRAC_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p);
  return {std::istreambuf_iterator<char>(is), {}};
}

std::size_t lines(const fs::path& p) {
  const std::string s = slurp(p);
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

fs::path scratch() {
  const fs::path d = fs::temp_directory_path() / "multifrac_cli_test";
  fs::create_directories(d);
  return d;
}

}  // namespace

TEST_CASE("simulate is deterministic and needs a seed") {
  const fs::path d = scratch();
  const std::string base = "simulate --measure stable --alpha 1.2 --eps 2e-3 --n 4096 ";
  CHECK(run(base + "--out " + (d / "a").string()) == 1);
  REQUIRE(run(base + "--seed 7 --out " + (d / "a").string()) == 0);
  REQUIRE(run(base + "--seed 7 --out " + (d / "b").string()) == 0);
  CHECK(fs::exists(d / "a.json"));
  CHECK(slurp(d / "a.csv") == slurp(d / "b.csv"));
  CHECK(slurp(d / "a.json").find("\"version\"") != std::string::npos);
  CHECK(lines(d / "a.csv") == 4098);
}

TEST_CASE("atomic measure file gives a compound Poisson path") {
  const fs::path d = scratch();
  std::ofstream(d / "atoms.txt") << "kind=atomic\natoms=0.5:3\n";
  REQUIRE(run("simulate --measure-file " + (d / "atoms.txt").string() +
              " --eps 0.25 --small-jumps compensate --n 1024 --seed 3 --out " + (d / "cp").string()) == 0);
  CHECK(slurp(d / "cp.json").find("\"jumps\"") != std::string::npos);
}

TEST_CASE("config file sits between defaults and flags") {
  const fs::path d = scratch();
  std::ofstream(d / "run.toml") << "[simulate]\nn = 1024\nseed = 5\nmeasure = \"none\"\ngaussian = 1.0\n";
  REQUIRE(run("--config " + (d / "run.toml").string() + " simulate --out " + (d / "c1").string()) == 0);
  CHECK(lines(d / "c1.csv") == 1026);
  REQUIRE(run("--config " + (d / "run.toml").string() + " simulate --n 2048 --out " + (d / "c2").string()) == 0);
  CHECK(lines(d / "c2.csv") == 2050);
}

TEST_CASE("fractional and analyze wiring") {
  const fs::path d = scratch();
  REQUIRE(run("fractional --kind lfsm --H 0.8 --alpha 1.5 --n 4096 --b-min -2 --seed 1 --out " + (d / "x").string()) ==
          0);
  REQUIRE(run("fractional --direct --H 0.8 --alpha 1.5 --n 4096 --b-min -2 --seed 1 --out " + (d / "y").string()) == 0);
  REQUIRE(run("analyze --in " + (d / "x.csv").string() + " --t 0.5 --out " + (d / "x").string()) == 0);
  CHECK(fs::exists(d / "x_field.csv"));
  CHECK(fs::exists(d / "x_frontier.json"));
  CHECK(slurp(d / "x_spectrum.csv").rfind("h,dim,count", 0) == 0);
  CHECK(run("fractional --kind lfsm --H 0.8 --n 4096 --out " + (d / "z").string()) == 1);
}

TEST_CASE("verify exit codes") {
  CHECK(run("verify nosuch") == 1);
  CHECK(run("verify analytic --budget quick") == 0);
  CHECK(run("verify analytic --budget sometimes") == 1);
  CHECK(run("frobnicate") == 1);
  // numeric failure: resolution too coarse for the scale window
  const fs::path d = scratch();
  REQUIRE(run("simulate --measure none --gaussian 1 --n 1024 --seed 1 --out " + (d / "tiny").string()) == 0);
  CHECK(run("analyze --in " + (d / "tiny.csv").string() + " --no-frontier --no-field --out " + (d / "tiny").string()) ==
        2);
}
