#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "threshold_lab/cli.hpp"

namespace fs = std::filesystem;
using threshold_lab::cli::run;

namespace {

struct Output {
  int code;
  std::string out;
  std::string err;
};

Output call(std::vector<std::string> args) {
  args.insert(args.begin(), "threshold_lab");
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

fs::path scratch_dir() {
  const fs::path dir = fs::temp_directory_path() / "threshold_lab_cli_test";
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("help exits zero") {
  CHECK(call({"--help"}).code == 0);
  CHECK(call({"bounds", "--help"}).code == 0);
}

TEST_CASE("missing subcommand is a usage error") {
  CHECK(call({}).code == 2);
  CHECK(call({"frobnicate"}).code == 2);
}

TEST_CASE("bounds csv") {
  const Output o = call({"bounds", "--k-min", "3", "--k-max", "4"});
  CHECK(o.code == 0);
  CHECK(o.out.rfind("k,lower,upper,hessian_bound,tangency_bound,binding,gap\n3,1.5,", 0) == 0);
  CHECK(o.out.find("HESSIAN") != std::string::npos);
}

TEST_CASE("bounds json and digits") {
  const Output o = call({"--digits", "6", "bounds", "--k-min", "5", "--k-max", "5", "--format", "json"});
  REQUIRE(o.code == 0);
  const auto j = nlohmann::json::parse(o.out);
  REQUIRE(j.is_array());
  CHECK(j[0]["k"] == 5);
  CHECK(j[0]["binding"] == "TANGENCY");
  CHECK(j[0]["upper"].get<double>() == doctest::Approx(10.7401));
}

TEST_CASE("digits after the subcommand") {
  const Output o = call({"bounds", "--k-min", "3", "--k-max", "3", "--digits", "4"});
  CHECK(o.code == 0);
  CHECK(o.out.find("\n3,1.5,2.409,") != std::string::npos);
}

TEST_CASE("bounds with reversed range") {
  const Output o = call({"bounds", "--k-min", "5", "--k-max", "4"});
  CHECK(o.code == 2);
  CHECK_FALSE(o.err.empty());
}

TEST_CASE("bounds with bad format") {
  CHECK(call({"bounds", "--format", "xml"}).code == 2);
}

TEST_CASE("gmax") {
  const Output o = call({"gmax", "--k", "3", "--r", "1.4", "--format", "json"});
  REQUIRE(o.code == 0);
  const auto j = nlohmann::json::parse(o.out);
  CHECK(j["alpha"].get<double>() == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(call({"gmax", "--k", "2", "--r", "1"}).code == 2);
  CHECK(call({"gmax", "--k", "3"}).code == 2);
}

TEST_CASE("moments single edge") {
  const Output o = call({"moments", "--k", "3", "--n", "3", "--m", "1", "--format", "json"});
  REQUIRE(o.code == 0);
  const auto j = nlohmann::json::parse(o.out);
  CHECK(j["first"].get<double>() == doctest::Approx(6.0));
  CHECK(j["second"].get<double>() == doctest::Approx(36.0));
}

TEST_CASE("moments argument errors") {
  CHECK(call({"moments", "--k", "3", "--n", "10"}).code == 2);
  CHECK(call({"moments", "--k", "3", "--n", "10", "--r", "1", "--m", "3"}).code == 2);
}

TEST_CASE("moments resource guard") {
  const Output o = call({"moments", "--k", "3", "--n", "500", "--r", "1.0", "--mode", "asym"});
  CHECK(o.code == 3);
  CHECK(o.err.find("n <= 400") != std::string::npos);
}

TEST_CASE("simulate with zero trials") {
  CHECK(call({"simulate", "--trials", "0", "--out", "-"}).code == 2);
}

TEST_CASE("simulate to an unwritable path") {
  const Output o = call({"simulate", "--n", "10", "--trials", "2", "--steps", "2", "--out",
                         "/nonexistent-dir/x/records.jsonl"});
  CHECK(o.code == 4);
}

TEST_CASE("simulate reruns are byte-identical") {
  const fs::path dir = scratch_dir();
  const std::vector<std::string> base{"simulate", "--k", "3", "--n", "20", "--r-min", "1", "--r-max", "3",
                                      "--steps", "3", "--trials", "10", "--seed", "77"};
  auto with = [&](const std::string& out, const std::string& summary, const std::string& threads) {
    std::vector<std::string> a{"--threads", threads};
    a.insert(a.end(), base.begin(), base.end());
    a.insert(a.end(), {"--out", (dir / out).string(), "--summary", (dir / summary).string()});
    return call(a).code;
  };
  REQUIRE(with("a.jsonl", "a.csv", "1") == 0);
  REQUIRE(with("b.jsonl", "b.csv", "3") == 0);
  const std::string a = slurp(dir / "a.jsonl");
  CHECK(a == slurp(dir / "b.jsonl"));
  CHECK(slurp(dir / "a.csv") == slurp(dir / "b.csv"));
  CHECK(std::count(a.begin(), a.end(), '\n') == 30);
  CHECK(slurp(dir / "a.csv").rfind("r,m,p_hat,ci", 0) == 0);
  fs::remove_all(dir);
}

TEST_CASE("verify fast") {
  const Output o = call({"verify"});
  CHECK(o.code == 0);
  CHECK(o.out.find("12/12 checks passed") != std::string::npos);
  CHECK(call({"verify", "--level", "slow"}).code == 2);
}

TEST_CASE("threads from the environment") {
  setenv("THRESHOLD_LAB_THREADS", "2", 1);
  CHECK(call({"bounds", "--k-min", "3", "--k-max", "5"}).code == 0);
  setenv("THRESHOLD_LAB_THREADS", "junk", 1);
  CHECK(call({"bounds", "--k-min", "3", "--k-max", "3"}).code == 0);
  unsetenv("THRESHOLD_LAB_THREADS");
}

}
