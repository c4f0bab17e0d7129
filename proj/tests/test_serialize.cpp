#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "diodef/harness.hpp"
#include "diodef/serialize.hpp"

using namespace diodef;

TEST_CASE("definition artifacts round trip bit-exactly") {
  FqtField K = FqtField::with_order(3);
  auto def = build_definition(K, K.parse_place("finite:t"));
  const Json j1 = definition_to_json(K, def);
  CHECK(j1.at("schema") == kDefinitionSchema);
  // field payload records the finite-field model for reproducibility
  CHECK(j1.at("field").at("kind") == "FqT");
  CHECK(j1.at("field").at("modulus").size() == 2);

  FqtField K2 = fqt_field_from_json(j1.at("field"));
  auto def2 = definition_from_json(K2, j1);
  const Json j2 = definition_to_json(K2, def2);
  CHECK(j1.dump(2) == j2.dump(2));  // serialize-parse-serialize fixed point

  RationalField Q;
  auto defq = build_definition(Q, Q.parse_place("prime:5"));
  const Json q1 = definition_to_json(Q, defq);
  auto defq2 = definition_from_json(q_field_from_json(q1.at("field")), q1);
  CHECK(q1.dump(2) == definition_to_json(Q, defq2).dump(2));
}

TEST_CASE("reloaded definitions decide identically") {
  FqtField K = FqtField::with_order(3);
  auto def = build_definition(K, K.parse_place("finite:t"));
  const Json j = definition_to_json(K, def);
  FqtField K2 = fqt_field_from_json(j.at("field"));
  auto def2 = definition_from_json(K2, j);
  for (const auto& x : enumerate_elements(K, 1))
    CHECK(decide(K, def, x).verdict == decide(K2, def2, x).verdict);

  RationalField Q;
  auto defq = build_definition(Q, Q.parse_place("prime:5"));
  auto defq2 = definition_from_json(Q, definition_to_json(Q, defq));
  std::mt19937 rng(601);
  std::uniform_int_distribution<long> dn(-60, 60);
  std::uniform_int_distribution<long> dd(1, 60);
  for (int it = 0; it < 40; ++it) {
    const BigRational x = make_rational(dn(rng), dd(rng));
    CHECK(decide(Q, defq, x).verdict == decide(Q, defq2, x).verdict);
  }
}

TEST_CASE("perfect-definition artifacts round trip") {
  PerfField K = PerfField::with_order(3);
  auto def = build_perf_definition(K, K.base_field().parse_place("finite:t"));
  const Json j1 = perf_definition_to_json(K, def);
  CHECK(j1.at("schema") == kPerfDefinitionSchema);
  CHECK(j1.at("copies").at(0).at("alpha_shifts").size() == 9);

  PerfField K2 = perf_field_from_json(j1.at("field"));
  auto def2 = perf_definition_from_json(K2, j1);
  CHECK(j1.dump(2) == perf_definition_to_json(K2, def2).dump(2));

  for (const auto& x : K.elements_up_to(1, 1))
    CHECK(decide_perf(K, def, x).verdict == decide_perf(K2, def2, x).verdict);
}

TEST_CASE("formula trees round trip") {
  FqtField K = FqtField::with_order(2);
  auto node = emit_formula_char2(K, K.t(), K.t() + K.one(), K.t(), K.t() + K.one());
  const Json j = formula_to_json(K, node);
  auto node2 = formula_from_json(K, j);
  CHECK(j.dump() == formula_to_json(K, node2).dump());
  // the polynomial carries the char-2 norm form against pq
  CHECK(j.at("op") == "exists");
  CHECK(j.at("child").at("op") == "eq");
}

TEST_CASE("decision traces serialize") {
  FqtField K = FqtField::with_order(3);
  auto def = build_definition(K, K.parse_place("finite:t"));
  auto tr = decide(K, def, K.t());
  const Json j = trace_to_json(K, tr);
  CHECK(j.at("verdict") == true);
  CHECK(j.at("copy0").at("member") == true);
}
