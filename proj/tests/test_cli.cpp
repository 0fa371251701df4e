#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "scaling/cli.hpp"

using namespace scaling;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args, const std::string& input = "") {
  std::istringstream in(input);
  std::ostringstream out, err;
  const int code = cli_main(args, in, out, err);
  return {code, out.str(), err.str()};
}

std::string simulate_exp(const std::string& seed = "1", const std::string& sigma = "0") {
  return run({"simulate", "--kind", "exp", "--C", "0.8", "--beta", "-1.2", "--D", "0.05", "--sizes",
              "pythia", "--sigma", sigma, "--seed", seed})
      .out;
}

nlohmann::json without_timestamp(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  j.erase("generated_at");
  return j;
}

std::filesystem::path temp_dir() {
  auto dir = std::filesystem::temp_directory_path() / "scaling_lab_cli_test";
  std::filesystem::create_directories(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("simulate output") {
  const auto csv = simulate_exp();
  CHECK(csv.rfind("family,dataset,metric,decoding,size,score,score_kind\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 9);
  CHECK(csv.find(",70M,") != std::string::npos);
  CHECK(csv.find(",12B,") != std::string::npos);
  CHECK(simulate_exp("3", "0.01") == simulate_exp("3", "0.01"));
  CHECK(simulate_exp("3", "0.01") != simulate_exp("4", "0.01"));
}

TEST_CASE("simulate piped into validate selects the exponential") {
  const auto r = run({"validate", "--input", "-", "--format", "json"}, simulate_exp());
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["cells"][0]["effective_law"] == "exponential");
}

TEST_CASE("validate is deterministic apart from the timestamp") {
  const auto dir = temp_dir();
  const auto input = dir / "scores.csv";
  {
    std::ofstream f(input);
    f << simulate_exp("7", "0.01");
  }
  const auto out = (dir / "report.json").string();
  REQUIRE(run({"validate", "--input", input.string(), "--out", out, "--seed", "42"}).code == 0);
  const auto first = slurp(out);
  REQUIRE(run({"validate", "--input", input.string(), "--out", out, "--seed", "42"}).code == 0);
  CHECK(without_timestamp(first) == without_timestamp(slurp(out)));

  const auto md = run({"validate", "--input", input.string()});
  CHECK(md.code == 0);
  CHECK(md.out.find("Stage I") != std::string::npos);
  const auto csv = run({"validate", "--input", input.string(), "--format", "csv"});
  CHECK(csv.code == 0);
  CHECK(std::count(csv.out.begin(), csv.out.end(), '\n') == 3);
}

TEST_CASE("too many folds is a data error") {
  const auto r = run({"validate", "--folds", "9", "--input", "-"}, simulate_exp());
  CHECK(r.code == 1);
  CHECK(r.err.find("too few points") != std::string::npos);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"validate", "--no-such-flag"}).code == 2);
  CHECK(run({"simulate"}).code == 2);
  CHECK(run({"validate", "--format", "html"}).code == 2);
  const auto r = run({"validate", "--bogus"});
  CHECK(r.err.find("validate") != std::string::npos);
}

TEST_CASE("data errors exit with 1") {
  CHECK(run({"validate", "--input", "/nonexistent.csv"}).code == 1);
  CHECK(run({"validate", "--input", "-"}, "family,dataset\n").code == 1);
}

TEST_CASE("fit prints parameters for both models") {
  const auto r = run({"fit", "--input", "-", "--format", "json"}, simulate_exp());
  REQUIRE(r.code == 0);
  CHECK(r.out.find("exponential") != std::string::npos);
  CHECK(r.out.find("power_law") != std::string::npos);
  const auto text = run({"fit", "--input", "-"}, simulate_exp());
  CHECK(text.code == 0);
  CHECK_FALSE(text.out.empty());
}

TEST_CASE("plot-data writes curves and observations") {
  const auto r = run({"plot-data", "--input", "-", "--grid", "20"}, simulate_exp("2", "0.01"));
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("cell_id,kind,x,y_fit,y_lo,y_hi\n", 0) == 0);
  CHECK(r.out.find("\ncell_id,x,y_obs\n") != std::string::npos);

  const auto dir = temp_dir();
  const auto out = dir / "curves.csv";
  std::filesystem::remove(dir / "curves_obs.csv");
  REQUIRE(run({"plot-data", "--input", "-", "--out", out.string(), "--grid", "20"},
              simulate_exp("2", "0.01"))
              .code == 0);
  const auto curves = slurp(out);
  CHECK(std::count(curves.begin(), curves.end(), '\n') == 41);
  const auto obs = slurp(dir / "curves_obs.csv");
  CHECK(std::count(obs.begin(), obs.end(), '\n') == 9);
}
