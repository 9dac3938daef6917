#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "derinv/catalog.hpp"
#include "derinv/errors.hpp"
#include "derinv/fmcheck.hpp"
#include "helpers.hpp"

using namespace derinv;
using namespace derinv::testing;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_profile(const NumericalProfile& P, const std::string& name) {
  auto path = (std::filesystem::temp_directory_path() / ("derinv_cli_" + name + ".json")).string();
  save_profile(P, path);
  return path;
}

}  // namespace

TEST_CASE("witt eval") {
  CHECK(cli::witt_eval("(1,0)+(1,0)", 3, 1, 2) == "(2,1)");
  CHECK(cli::witt_eval("2", 3, 1, 2) == "(2,1)");
  CHECK(cli::witt_eval("V(1)", 3, 1, 3) == "(0,1,0)");
  CHECK(cli::witt_eval("F(V((1,2)))", 5, 1, 2) == cli::witt_eval("5*(1,2)", 5, 1, 2));
  CHECK(cli::witt_eval("-(1) + 1", 2, 1, 3) == "(0,0,0)");
  CHECK(cli::witt_eval("(t,1)*(t,0) - (t,1)*(t,0)", 3, 2, 2) == "(0,0)");
  CHECK_THROWS_AS(cli::witt_eval("(1,0,0)", 3, 1, 2), ParseError);
  CHECK_THROWS_AS(cli::witt_eval("(1+", 3, 1, 2), ParseError);
  CHECK_THROWS_AS(cli::witt_eval("G(1)", 3, 1, 2), ParseError);
}

TEST_CASE("exit codes") {
  CHECK(run({"witt", "eval", "(1,0)+(1,0)", "--p", "3", "--n", "2"}).out == "(2,1)\n");
  CHECK(run({"witt", "eval", "(1,", "--p", "3"}).code == cli::kParseOrIo);
  CHECK(run({"invariants", "k3:ss:3", "--colour"}).code == cli::kParseOrIo);
  CHECK(run({"invariants", "/nonexistent/profile.json"}).code == cli::kParseOrIo);
  CHECK(run({"compare", "k3:ss:1", "k3:ss:2"}).code == cli::kObstruction);
  CHECK(run({"compare", "k3:ss:3", "k3:ss:3"}).code == cli::kOk);
  CHECK(run({"verify", data_path("profiles/broken_duality.json")}).code == cli::kValidation);
  CHECK(run({"rmod", "check", data_path("fixtures/broken/fdv_u2.json")}).code == cli::kValidation);
  CHECK(run({"rmod", "check", data_path("fixtures/rmod/u_sigma_3_m5.json")}).code == cli::kOk);
  CHECK(run({"ss", "k3:ss:3", "--kind", "sideways"}).code == cli::kParseOrIo);
  CHECK(run({}).code == cli::kParseOrIo);
  CHECK(run({"--help"}).code == cli::kOk);
}

TEST_CASE("insufficient data everywhere") {
  ObstructionReport R;
  Check c;
  c.id = "v";
  c.applicable = true;
  c.verdict = Verdict::InsufficientData;
  R.checks = {c, c};
  CHECK(R.all_insufficient());
  CHECK(R.exit_code() == cli::kInsufficient);
}

TEST_CASE("insufficient data from a report") {
  auto P = lookup("abelian:2:1").profile;
  P.dominoes.reset();
  auto path = temp_profile(P, "nodom");
  CHECK(run({"ss", path, "--kind", "slope"}).code == cli::kInsufficient);
}

TEST_CASE("invariant report") {
  auto r = run({"invariants", "k3:ss:3"});
  CHECK(r.code == 0);
  CHECK(r.out.find("height inf") != std::string::npos);
  CHECK(r.out.find("i=1: 0 20 0") != std::string::npos);
  CHECK(r.out.find("i=0: 0 0 1") != std::string::npos);
}

TEST_CASE("spectral sequence rendering") {
  auto r = run({"ss", "k3:ss:3", "--kind", "descent", "--twist", "p"});
  CHECK(r.code == 0);
  CHECK(r.out.find("{ord(alpha)W}") != std::string::npos);
  CHECK(r.out.find("/dlog(alpha)") != std::string::npos);
  auto t = run({"ss", "k3:ss:3", "--kind", "tate", "--twist", "3^1"});
  CHECK(t.out.find("dim K = 4") != std::string::npos);
  CHECK(run({"ss", "k3:ss:3", "--kind", "descent", "--twist", "2"}).code == cli::kParseOrIo);
}

TEST_CASE("JSON output is bit-stable") {
  for (std::vector<std::string> args : {std::vector<std::string>{"invariants", "abelian:3:2", "--json"},
                                         {"compare", "k3:h:2", "k3:h:3", "--json"},
                                         {"ss", "k3:ss:2", "--kind", "tate", "--json"},
                                         {"catalog", "list", "--json"}}) {
    auto a = run(args), b = run(args);
    CHECK(a.out == b.out);
    CHECK(!nlohmann::json::parse(a.out).is_null());
  }
}

TEST_CASE("catalog subcommands") {
  auto r = run({"catalog", "list"});
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == long(builtin_catalog().size()));
  auto s = run({"catalog", "show", "curve:1:1"});
  CHECK(profile_from_json(nlohmann::json::parse(s.out)).name == "curve:1:1");
  CHECK(run({"verify", "--all"}).code == 0);
}

TEST_CASE("u-sigma output is a valid module") {
  auto r = run({"rmod", "u-sigma", "--p", "2", "--sigma", "3", "--m", "6"});
  REQUIRE(r.code == 0);
  auto M = rmodule_from_json(nlohmann::json::parse(r.out));
  CHECK(check_relations(M).empty());
  CHECK(domino_number(M, 0) == 1);
}
