#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"

using namespace wsg::cli;
using nlohmann::json;

namespace {

struct Result {
  int status;
  std::string out;
  std::string err;
};

Result run_with(const std::string& sub, const std::map<std::string, std::string>& kv = {}) {
  RunConfig cfg(sub);
  for (const auto& [k, v] : kv) cfg.set(k, v);
  std::ostringstream out, err;
  const int status = run(cfg, out, err);
  return {status, out.str(), err.str()};
}

Result run_argv(std::vector<std::string> args) {
  args.insert(args.begin(), "wsg");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  const int status = main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
  return {status, out.str(), err.str()};
}

std::filesystem::path scratch_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("wsg_cli_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("verify-weight on the default triangle setup") {
  const Result r = run_with("verify-weight");
  CHECK(r.status == kOk);
  const json j = json::parse(r.out);
  CHECK(j["pearson"]["pass"] == true);
  CHECK(j["pearson"]["psi1"] == "1 - 3*x1");
  CHECK(j["pearson"]["psi2"] == "1 - 3*x2");
  CHECK(j["pearson"]["detD"] == 9.0);
  CHECK(j["boundary"]["pass"] == true);
  CHECK(j["boundary"]["edges"].size() == 3);
  CHECK(j["compat"]["A"]["pass"] == true);
  CHECK(j["compat"]["B"]["pass"] == false);
  CHECK(j["config"]["alpha"] == "0");
  CHECK(j["config"]["phi11"] == "x1*(1-x1)");
}

TEST_CASE("verify-weight with the identity matrix fails on the first edge") {
  const Result r = run_with("verify-weight", {{"phi11", "1"}, {"phi12", "0"}, {"phi22", "1"}});
  CHECK(r.status == kVerificationFailed);
  const json j = json::parse(r.out);
  CHECK(j["boundary"]["pass"] == false);
  CHECK(j["boundary"]["first_failure"]["edge"] == 1);
  CHECK(j["boundary"]["edges"][0]["form"] == "x1");
  CHECK(j["pearson"]["pass"] == false);
}

TEST_CASE("verify-weight float mode and custom factors") {
  Result r = run_with("verify-weight", {{"mode", "float"}, {"alpha", "0.5"}});
  CHECK(r.status == kOk);
  CHECK(json::parse(r.out)["pearson"]["psi1"] == "1.5 - 3.5*x1");

  r = run_with("verify-weight", {{"factors", "x1:1/2; 1-x1:2; x2:0; 1-x2:-1/2"},
                                 {"edges", "x1:-1,0; x2:0,-1; 1-x1:1,0; 1-x2:0,1"},
                                 {"phi11", "x1*(1-x1)"},
                                 {"phi12", "0"},
                                 {"phi22", "x2*(1-x2)"}});
  CHECK(r.status == kOk);
  CHECK(json::parse(r.out)["boundary"]["edges"].size() == 4);

  r = run_with("verify-weight", {{"edges", "x1; x2; 1-x1-x2"}});
  CHECK(r.status == kOk);
}

TEST_CASE("eig at degree 0 reports 7/3") {
  const Result r = run_with("eig", {{"degree", "0"}});
  CHECK(r.status == kOk);
  const json j = json::parse(r.out);
  REQUIRE(j["values"].size() == 1);
  CHECK(j["values"][0].get<double>() == doctest::Approx(7.0 / 3).epsilon(1e-14));
  CHECK(j["dimension"] == 1);
}

TEST_CASE("reports are deterministic") {
  for (const auto& sub : subcommands()) {
    std::map<std::string, std::string> kv{{"degree", "3"}, {"max_degree", "3"}, {"max_order", "3"}, {"nodes", "3"}};
    const Result a = run_with(sub, kv), b = run_with(sub, kv);
    CHECK(a.status == kOk);
    CHECK(a.out == b.out);
    CHECK_FALSE(a.out.empty());
  }
}

TEST_CASE("csv reports carry the config and 17 significant digits") {
  const Result r = run_with("moments", {{"max_order", "2"}});
  CHECK(r.status == kOk);
  std::istringstream in(r.out);
  std::string line;
  std::vector<std::string> comments, rows;
  while (std::getline(in, line)) (line.rfind("# ", 0) == 0 ? comments : rows).push_back(line);
  CHECK(comments.size() == RunConfig::known_keys().size());
  REQUIRE(rows.size() == 10);
  CHECK(rows[0] == "m,n,moment");
  CHECK(rows[1] == "0,0,0.5");
  CHECK(rows[2] == "0,1,0.16666666666666666");

  const Result q = run_with("quadrature", {{"nodes", "1"}});
  const auto header = q.out.find("x1,x2,weight\n");
  REQUIRE(header != std::string::npos);
  std::istringstream row(q.out.substr(header + 13));
  std::string x1, x2, weight;
  std::getline(row, x1, ',');
  std::getline(row, x2, ',');
  std::getline(row, weight);
  CHECK(std::stod(x1) == doctest::Approx(1.0 / 3).epsilon(1e-15));
  CHECK(x2 == "0.33333333333333331");
  CHECK(x1.size() == 19);  // "0." plus 17 significant digits
  CHECK(weight == "0.5");

  const Result c = run_with("converge", {{"min_degree", "0"}, {"max_degree", "2"}, {"count", "2"}});
  CHECK(c.out.find("degree,nu0,nu1,orthogonality_defect,bound_margin\n") != std::string::npos);
}

TEST_CASE("json format for table commands") {
  const Result r = run_with("quadrature", {{"nodes", "2"}, {"format", "json"}});
  const json j = json::parse(r.out);
  CHECK(j["nodes"].size() == 4);
  CHECK(j["exactness_degree"] == 1);
  const Result m = run_with("moments", {{"format", "json"}, {"max_order", "1"}});
  CHECK(json::parse(m.out)["mass"] == 0.5);
}

TEST_CASE("solve recovers the constant solution") {
  const Result r = run_with("solve", {{"degree", "2"}});
  CHECK(r.status == kOk);
  const json j = json::parse(r.out);
  CHECK(j["monomial_coefficients"][0]["value"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(j["weak_residual"].get<double>() < 1e-12);
}

TEST_CASE("config errors exit with status 3") {
  CHECK_THROWS_AS(RunConfig("verify-weight").set("nonsense", "1"), ConfigError);
  CHECK_THROWS_AS(RunConfig("not-a-command"), ConfigError);
  CHECK(run_with("moments", {{"alpha", "-1"}}).status == kConfigError);
  CHECK(run_with("eig", {{"degree", "-2"}}).status == kConfigError);
  CHECK(run_with("eig", {{"degree", "two"}}).status == kConfigError);
  CHECK(run_with("verify-weight", {{"phi11", "x1*("}}).status == kConfigError);
  CHECK(run_with("verify-weight", {{"mode", "fast"}}).status == kConfigError);
  CHECK(run_with("eig", {{"format", "xml"}}).status == kConfigError);
  CHECK(run_with("converge", {{"min_degree", "4"}, {"max_degree", "2"}}).status == kConfigError);
  CHECK(run_argv({"eig", "--bogus", "1"}).status == kConfigError);
  CHECK(run_argv({}).status == kConfigError);
}

TEST_CASE("config file with flag overrides") {
  const auto dir = scratch_dir("config");
  const auto file = dir / "run.cfg";
  std::ofstream(file) << "# comment\ndegree = 1\nalpha = 1/2   # trailing\n\nbeta=0\n";
  Result r = run_argv({"eig", "--config", file.string(), "--alpha", "1"});
  CHECK(r.status == kOk);
  json j = json::parse(r.out);
  CHECK(j["config"]["alpha"] == "1");
  CHECK(j["config"]["degree"] == "1");
  CHECK(j["values"].size() == 3);

  std::ofstream(dir / "bad.cfg") << "degree = 1\nunknown = 4\n";
  r = run_argv({"eig", "--config", (dir / "bad.cfg").string()});
  CHECK(r.status == kConfigError);
  CHECK(r.err.find("bad.cfg:2") != std::string::npos);
  CHECK(run_argv({"eig", "--config", (dir / "missing.cfg").string()}).status == kConfigError);
}

TEST_CASE("output directory from the environment") {
  const auto dir = scratch_dir("outdir");
  ::setenv("WSG_OUTPUT_DIR", dir.c_str(), 1);
  Result r = run_with("moments", {{"max_order", "1"}});
  CHECK(r.status == kOk);
  CHECK(r.out.empty());
  CHECK(std::filesystem::exists(dir / "moments.csv"));
  r = run_with("eig", {{"degree", "0"}, {"output", "sub/eig0.json"}});
  CHECK(std::filesystem::exists(dir / "sub" / "eig0.json"));
  ::unsetenv("WSG_OUTPUT_DIR");
}
