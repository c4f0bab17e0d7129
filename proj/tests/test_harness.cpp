#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "diodef/harness.hpp"
#include "diodef/serialize.hpp"

using namespace diodef;

TEST_CASE("enumeration examples") {
  FqtField K = FqtField::with_order(3);
  CHECK(enumerate_elements(K, 0).size() == 3);
  RationalField Q;
  auto r2 = enumerate_elements(Q, 2);
  REQUIRE(r2.size() == 7);
  // each exactly once
  for (size_t i = 0; i < r2.size(); ++i)
    for (size_t j = i + 1; j < r2.size(); ++j) CHECK(!(r2[i] == r2[j]));
  CHECK_THROWS_AS(enumerate_elements(Q, -1), ArgumentError);
}

TEST_CASE("precision refusal is an error, not a guess") {
  RationalField Q;
  const auto v3 = Q.parse_place("prime:3");
  // <1, 1, 3> is anisotropic over Q_3; at precision 1 nothing lifts but
  // approximate zeros exist, so the oracle must refuse
  CHECK_THROWS_AS(oracle_isotropic(Q, v3, {Q.one(), Q.one(), Q.from_int(3)}, 1),
                  PrecisionError);
  // at the certified default it is exact
  CHECK(!oracle_isotropic(Q, v3, {Q.one(), Q.one(), Q.from_int(3)}));
}

TEST_CASE("agreement sweep over F_3(t)") {
  FqtField K = FqtField::with_order(3);
  auto def = build_definition(K, K.parse_place("finite:t"));
  SweepReport rep = agreement_sweep(K, def, 1);
  CHECK(rep.pass());
  CHECK(rep.tested == enumerate_elements(K, 1).size());
  CHECK(rep.agreed == rep.tested);
  CHECK(rep.disagreements.empty());
}

TEST_CASE("agreement sweep over Q") {
  RationalField Q;
  auto def = build_definition(Q, Q.parse_place("prime:5"));
  SweepReport rep = agreement_sweep(Q, def, 8);
  CHECK(rep.pass());
  CHECK(rep.tested == enumerate_elements(Q, 8).size());
}

TEST_CASE("perfect-closure agreement sweep") {
  PerfField K = PerfField::with_order(3);
  auto def = build_perf_definition(K, K.base_field().parse_place("finite:t"));
  SweepReport rep = perf_agreement_sweep(K, def, 1, 1);
  CHECK(rep.pass());
  CHECK(rep.tested == K.elements_up_to(1, 1).size());
}

TEST_CASE("reports are byte-identical across runs") {
  FqtField K = FqtField::with_order(3);
  auto def = build_definition(K, K.parse_place("finite:t"));
  SweepReport r1 = agreement_sweep(K, def, 1);
  SweepReport r2 = agreement_sweep(K, def, 1);
  CHECK(report_to_json(r1).dump(2) == report_to_json(r2).dump(2));
}
