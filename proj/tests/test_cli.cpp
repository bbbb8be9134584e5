#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "rgroups/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = 0;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "rgroups");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Run r;
  r.code = rgroups::dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

}  // namespace

TEST_CASE("usage errors exit with 2") {
  CHECK(run({}).code == 2);
  CHECK(run({"ball", "--bogus"}).code == 2);
  CHECK(run({"ball", "-p", "free:m=2"}).code == 2);
  CHECK(run({"nonsense"}).code == 2);
  CHECK(run({"sample", "--d", "x", "-l", "5"}).code == 2);
  CHECK(run({"wp", "-p", "free:m=2", "--word", "c"}).code == 2);
  CHECK(run({"growth", "-r", "3"}).code == 2);
  // Dehn's algorithm is refused outside C'(1/6).
  const auto dehn = run({"ball", "-p", "z2", "-r", "3", "--backend", "dehn"});
  CHECK(dehn.code == 2);
  CHECK(dehn.err.find("C'(1/6)") != std::string::npos);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("runtime failures exit with 1") {
  const auto r = run({"ball", "-p", "/nonexistent/p.json", "-r", "2"});
  CHECK(r.code != 0);
  CHECK(run({"sample", "--d", "1/6", "-l", "120"}).code == 1);
}

TEST_CASE("ball counts") {
  const auto r = run({"ball", "-p", "free:m=2", "-r", "4"});
  CHECK(r.code == 0);
  CHECK(r.out == "radius,count\n0,1\n1,5\n2,17\n3,53\n4,161\n");
  const auto j = nlohmann::json::parse(run({"ball", "-p", "surface:genus=2", "-r", "3", "--json"}).out);
  CHECK(j.at("schema_version") == rgroups::kCliSchemaVersion);
  CHECK(j.at("command") == "ball");
  CHECK(j.at("backend") == "dehn");
  CHECK(j.at("ball_counts") == nlohmann::json({"1", "9", "65", "457"}));
}

TEST_CASE("word problem") {
  CHECK(run({"wp", "-p", "surface:genus=2", "--word", "abABcdCD"}).out == "yes (dehn)\n");
  CHECK(run({"wp", "-p", "surface:genus=2", "--word", "abAB"}).out == "no (dehn)\n");
  CHECK(run({"wp", "-p", "z2", "--word", "ab", "--equal", "ba"}).out == "yes (budget)\n");
  const auto j = nlohmann::json::parse(
      run({"wp", "-p", "surface:genus=2", "--word", "abABcdC", "--json"}).out);
  CHECK(j.at("reduced") == "d");
}

TEST_CASE("certify") {
  const auto ok = run({"certify", "--oracle", "closed-form-free:m=2", "--g", "1", "--l0", "7",
                       "--A", "500", "--require-bound"});
  CHECK(ok.code == 0);
  CHECK(ok.out.find("bound 0.92 (23/25)") != std::string::npos);
  const auto no = run({"certify", "--oracle", "closed-form-free:m=2", "--g", "1", "--l0", "4",
                       "--A", "500", "--require-bound"});
  CHECK(no.code == 1);
  CHECK(no.out.find("no bound issued") != std::string::npos);
  CHECK(run({"certify", "--oracle", "closed-form-free:m=2", "--g", "1", "--l0", "4"}).code == 0);
  const auto j = nlohmann::json::parse(run({"certify", "--oracle", "closed-form-free:m=2", "--g",
                                            "1", "--l0", "7", "--json"})
                                           .out);
  CHECK(j.at("schema_version") == 1);
  CHECK(j.at("certificate").contains("bound"));
}

TEST_CASE("sample, analyze and growth") {
  const auto path = fs::temp_directory_path() / "rgroups_cli_sample.json";
  const auto s = run({"sample", "--m", "2", "--d", "1/12", "-l", "12", "--seed", "4", "--out",
                      path.string()});
  REQUIRE(s.code == 0);
  CHECK(nlohmann::json::parse(s.out).at("relators").size() == 3);
  const auto a = run({"analyze", "-p", path.string(), "--alpha", "1/6", "--json"});
  CHECK(a.code == 0);
  CHECK(nlohmann::json::parse(a.out).at("relators") == 3);
  fs::remove(path);

  const auto g = run({"growth", "--oracle", "closed-form-free:m=2", "-r", "2"});
  CHECK(g.code == 0);
  CHECK(g.out.rfind("radius,count,g\n1,5,", 0) == 0);
  const auto d = run({"delta", "-p", "free:m=2", "-r", "2", "--table-radius", "4"});
  CHECK(d.code == 0);
  CHECK(d.out.rfind("delta_observed 0 ", 0) == 0);
}

TEST_CASE("sweep from a spec file") {
  const auto dir = fs::temp_directory_path() / "rgroups_cli_sweep";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const auto spec = dir / "spec.json";
  std::ofstream(spec) << R"({"schema_version": 1, "name": "cli", "master_seed": 1,
    "grid": {"m": [2], "d": ["1/12"], "length": [12]}, "seeds": 2,
    "analyses": {"small_cancellation": {"alphas": ["1/6"]}}})";
  const auto r = run({"sweep", "--spec", spec.string(), "--out", (dir / "out").string(), "--json"});
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("records") == 2);
  CHECK(fs::exists(dir / "out" / "pieces.csv"));
  std::ofstream(spec) << R"({"schema_version": 1, "grid": {"m": [2]}, "bogus": 1})";
  CHECK(run({"sweep", "--spec", spec.string(), "--out", (dir / "out").string()}).code == 2);
  fs::remove_all(dir);
}
