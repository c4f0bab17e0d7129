#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "diodef/harness.hpp"
#include "diodef/serialize.hpp"

#ifndef DIODEF_CLI_BINARY
#error "DIODEF_CLI_BINARY must point at the built executable"
#endif

using namespace diodef;

namespace {

int run_cli(const std::string& args, const std::string& stdout_path = "") {
  std::string cmd = std::string(DIODEF_CLI_BINARY) + " " + args;
  if (!stdout_path.empty()) cmd += " > " + stdout_path;
  cmd += " 2> /dev/null";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

Json slurp_json(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  Json j;
  in >> j;
  return j;
}

}  // namespace

TEST_CASE("cli end to end over F_3(t)") {
  REQUIRE(run_cli("build --field F3t --place finite:t --out cli_def.json") == 0);
  const Json def = slurp_json("cli_def.json");
  CHECK(def.at("schema") == kDefinitionSchema);

  // decide: verdicts match the in-memory pipeline on a corpus
  FqtField K = FqtField::with_order(3);
  auto mem_def = definition_from_json(K, def);
  int checked = 0;
  for (const auto& x : enumerate_elements(K, 1)) {
    REQUIRE(run_cli("decide --def cli_def.json --element \"" + K.to_string(x) + "\"",
                    "cli_out.json") == 0);
    const Json out = slurp_json("cli_out.json");
    CHECK(out.at("verdict").get<bool>() == decide(K, mem_def, x).verdict);
    if (++checked >= 9) break;  // subprocess spawns are slow; sample the corpus
  }

  REQUIRE(run_cli("verify --def cli_def.json --bound 1 --out cli_report.json") == 0);
  const Json rep = slurp_json("cli_report.json");
  CHECK(rep.at("schema") == kReportSchema);
  CHECK(rep.at("counts").at("disagreed") == 0);

  REQUIRE(run_cli("emit --def cli_def.json --out cli_formula.json") == 0);
  const Json formula = slurp_json("cli_formula.json");
  CHECK(formula.at("op") == "exists");
}

TEST_CASE("cli perfect-closure commands") {
  REQUIRE(run_cli("perfect-build --field F3t --place finite:t --out cli_pdef.json") == 0);
  const Json def = slurp_json("cli_pdef.json");
  CHECK(def.at("schema") == kPerfDefinitionSchema);

  REQUIRE(run_cli("perfect-decide --def cli_pdef.json --element \"level=1; s\"",
                  "cli_pout.json") == 0);
  CHECK(slurp_json("cli_pout.json").at("verdict") == true);
  REQUIRE(run_cli("perfect-decide --def cli_pdef.json --element \"level=1; 1/s\"",
                  "cli_pout.json") == 0);
  CHECK(slurp_json("cli_pout.json").at("verdict") == false);

  REQUIRE(run_cli("perfect-verify --def cli_pdef.json --bound 1 --maxlevel 1") == 0);
}

TEST_CASE("cli char-2 emission") {
  REQUIRE(run_cli("emit --char2 --field F2t --a t --b t+1 --p t --q t+1 "
                  "--out cli_char2.json") == 0);
  const Json formula = slurp_json("cli_char2.json");
  CHECK(formula.at("op") == "exists");
  CHECK(formula.at("vars").size() == 3);
}

TEST_CASE("cli exit codes") {
  CHECK(run_cli("build --field F3t") == 1);                       // missing flags
  CHECK(run_cli("build --field F4t --place finite:t --out x.json") == 1);  // char 2
  CHECK(run_cli("decide --def missing.json --element 0") == 1);
  // a tiny coset cap forces the documented refusal
  CHECK(run_cli("build --field F3t --place finite:t --coset-cap 2 --out x.json") == 3);
  // Q pipeline refuses the dyadic place
  CHECK(run_cli("build --field Q --place prime:2 --out x.json") == 1);
}
