#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "mixshape/job.hpp"

using mixshape::cli::run;
using nlohmann::json;

namespace {

json st_payload() {
  return json::parse(R"({
    "dim": 2,
    "matrices": [[["0","-1"],["1","0"]], [["0","-1"],["1","-1"]]]
  })");
}

struct ProcessResult {
  int exit_code;
  std::string out;
};

std::string make_temp(const char* tag) {
  std::string path = std::string("/tmp/mixshape_cli_") + tag + "_XXXXXX";
  int fd = mkstemp(path.data());
  REQUIRE(fd >= 0);
  close(fd);
  return path;
}

ProcessResult run_binary(const std::string& args, const std::string& stdin_text) {
  std::string in_path = make_temp("in");
  std::string out_path = make_temp("out");
  {
    std::ofstream f(in_path);
    f << stdin_text;
  }
  std::string cmd = std::string(MIXSHAPE_CLI_PATH) + " " + args + " < " + in_path + " > " +
                    out_path + " 2>/dev/null";
  int status = std::system(cmd.c_str());
  std::ifstream f(out_path);
  std::stringstream ss;
  ss << f.rdbuf();
  std::remove(in_path.c_str());
  std::remove(out_path.c_str());
  return {WEXITSTATUS(status), ss.str()};
}

}  // namespace

TEST_CASE("ergodic command") {
  json payload{{"matrices", {{{1, 1}, {1, 0}}}}};
  auto r = run("ergodic", payload);
  CHECK(r.exit_code == 0);
  CHECK(r.report.at("ergodic") == true);

  json rot{{"matrices", {{{0, -1}, {1, 0}}}}};
  CHECK(run("ergodic", rot).report.at("ergodic") == false);
}

TEST_CASE("mixing-set golden report") {
  auto r = run("mixing-set", st_payload());
  REQUIRE(r.exit_code == 0);
  CHECK(r.report.at("verdict") == "not_mixing");
  CHECK(r.report.at("exponent") == 12);
  CHECK(r.report.at("witness") == json::parse(R"([["1","0"],["-1","0"]])"));
  CHECK(r.report.at("support") == json::parse("[0,1]"));
  CHECK(r.report.at("exponents_checked") == json::parse("[1,2,3,4,5,6,8,10,12]"));
}

TEST_CASE("serialized certificates re-verify") {
  auto verdict = run("mixing-set", st_payload());
  json payload = st_payload();
  payload["certificate"] = {{"exponent", verdict.report.at("exponent")},
                            {"witness", verdict.report.at("witness")}};
  auto check = run("verify-cert", payload);
  CHECK(check.exit_code == 0);
  CHECK(check.report.at("valid") == true);

  payload["certificate"]["witness"][0][0] = "2";
  CHECK(run("verify-cert", payload).report.at("valid") == false);
}

TEST_CASE("reports are byte-identical across runs") {
  auto a = run("mixing-set", st_payload());
  auto b = run("mixing-set", st_payload());
  CHECK(a.report.dump(2) == b.report.dump(2));

  json mc = st_payload();
  mc["boxes"] = json::parse(R"([[["0","1/2"],["0","1/2"]],[["0","1/2"],["0","1/2"]]])");
  mc["options"] = {{"n", 6}, {"samples", 2000}, {"seed", 5}};
  CHECK(run("oracle-mc", mc).report.dump(2) == run("oracle-mc", mc).report.dump(2));
}

TEST_CASE("exit codes separate parse errors from contract violations") {
  CHECK(run("mixing-set", json{{"matrices", "nope"}}).exit_code == 2);
  CHECK(run("mixing-set", json::object()).exit_code == 2);
  CHECK(run("nonsense", json::object()).exit_code == 2);
  // determinant zero violates the epimorphism contract
  json degenerate{{"matrices", {{{1, 1}, {1, 1}}, {{1, 0}, {0, 1}}}}};
  CHECK(run("mixing-set", degenerate).exit_code == 3);
  // non-commuting input to the commuting criterion
  CHECK(run("commuting", st_payload()).exit_code == 3);
}

TEST_CASE("limit command on the sign pair") {
  json payload{{"dim", 1},
               {"matrices", {{{1}}, {{-1}}}},
               {"characters", {{1}, {1}}}};
  auto r = run("limit", payload);
  REQUIRE(r.exit_code == 0);
  CHECK(r.report.at("modulus") == 2);
  CHECK(r.report.at("values").at("0") == json{{"im", "0"}, {"re", "0"}});
  CHECK(r.report.at("values").at("1") == json{{"im", "0"}, {"re", "1"}});
}

TEST_CASE("mixing-pair and joint and orbit-scan commands") {
  auto pair = run("mixing-pair", st_payload());
  CHECK(pair.report.at("verdict") == "not_mixing");
  CHECK(pair.report.at("quotient_witness").at("exponent") == 12);

  json gold{{"matrices", {{{1, 1}, {1, 0}}, {{2, 1}, {1, 1}}}}};
  auto mixing_pair = run("mixing-pair", gold);
  CHECK(mixing_pair.report.at("verdict") == "mixing");
  CHECK(mixing_pair.report.at("quotient_witness").is_null());

  json jfib{{"matrices", {{{1, 1}, {1, 0}}}}};
  CHECK(run("joint", jfib).report.at("jointly_mixing") == true);

  json orbit{{"matrices", {{{0, -1}, {1, 0}}}},
             {"options", {{"character", {1, 0}}, {"cap", 64}}}};
  auto o = run("orbit-scan", orbit);
  CHECK(o.report.at("result") == "finite_orbit");
  CHECK(o.report.at("orbit").size() == 4);
}

TEST_CASE("group-scan command") {
  json payload{{"matrices", {{{1, 1}, {0, 1}}}},
               {"options", {{"word_len", 3}, {"use_inverses", true}}}};
  auto r = run("group-scan", payload);
  CHECK(r.report.at("result") == "refuted");
  CHECK(r.report.at("reason") == "root_of_unity_eigenvalue");
  CHECK(r.report.at("word") == "g0");
}

TEST_CASE("gen-example command") {
  json uni{{"options", {{"kind", "unipotent"}, {"d", 2}, {"s", 3}}}};
  auto r = run("gen-example", uni);
  REQUIRE(r.exit_code == 0);
  CHECK(r.report.at("matrices").size() == 3);

  json eis{{"options", {{"kind", "eisenstein"}, {"d", 2}, {"q", 101}}}};
  auto e = run("gen-example", eis);
  CHECK(e.report.at("coefficients") == json::parse(R"(["20503","-303","1"])"));

  json fix{{"options", {{"kind", "fixtures"}, {"name", "st"}}}};
  CHECK(run("gen-example", fix).report.at("matrices").size() == 2);
}

TEST_CASE("oracle-search command") {
  json payload = st_payload();
  payload["options"] = {{"height", 1}, {"horizon", 24}, {"min_hits", 2}};
  auto r = run("oracle-search", payload);
  REQUIRE(r.exit_code == 0);
  CHECK(!r.report.at("witness").is_null());

  json quiet{{"matrices", {{{1, 1}, {1, 0}}}},
             {"options", {{"height", 3}, {"horizon", 20}, {"min_hits", 1}}}};
  CHECK(run("oracle-search", quiet).report.at("witness").is_null());
}

TEST_CASE("oracle-search in higher order") {
  json gen{{"options", {{"kind", "unipotent"}, {"d", 2}, {"s", 3}}}};
  json family = run("gen-example", gen).report.at("matrices");
  json payload{{"matrices", family},
               {"options",
                {{"order", 3}, {"word_len", 1}, {"height", 2}, {"horizon", 8}, {"form", "group"}}}};
  auto r = run("oracle-search", payload);
  REQUIRE(r.exit_code == 0);
  CHECK(!r.report.at("witness").is_null());
  CHECK(r.report.at("witness").at("words").size() == 3);

  payload["options"]["form"] = "banana";
  CHECK(run("oracle-search", payload).exit_code == 2);
}

TEST_CASE("the installed binary round-trips a job") {
  auto r = run_binary("mixing-set", st_payload().dump());
  REQUIRE(r.exit_code == 0);
  json report = json::parse(r.out);
  CHECK(report.at("verdict") == "not_mixing");
  CHECK(report.at("exponent") == 12);

  auto bad = run_binary("mixing-set", "this is not json");
  CHECK(bad.exit_code == 2);

  auto flagged = run_binary("limit --residue 1", R"({"dim":1,"matrices":[[["1"]],[["-1"]]],"characters":[[1],[1]]})");
  REQUIRE(flagged.exit_code == 0);
  json lim = json::parse(flagged.out);
  CHECK(lim.at("values").size() == 1);
  CHECK(lim.at("values").at("1") == json{{"im", "0"}, {"re", "1"}});

  auto extended = run_binary("mixing-set --max-exponent 15", st_payload().dump());
  REQUIRE(extended.exit_code == 0);
  json rep = json::parse(extended.out);
  CHECK(rep.at("exponent") == 12);
  json checked = rep.at("exponents_checked");
  CHECK(std::find(checked.begin(), checked.end(), json(7)) != checked.end());
}
