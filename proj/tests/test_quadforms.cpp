#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "diodef/harness.hpp"
#include "diodef/quadforms.hpp"

using namespace diodef;

namespace {

RatFunc rnd(const FqtField& K, long maxdeg, std::mt19937& rng, bool nonzero = false) {
  const auto& F = K.constants();
  std::uniform_int_distribution<int> dd(0, static_cast<int>(maxdeg));
  std::uniform_int_distribution<std::uint64_t> dc(0, F->order() - 1);
  auto rpoly = [&](bool nz) {
    while (true) {
      const int deg = dd(rng);
      std::vector<FFElem> cs;
      for (int i = 0; i <= deg; ++i) cs.push_back(F->from_index(dc(rng)));
      Poly f(F, std::move(cs));
      if (!nz || !f.is_zero()) return f;
    }
  };
  while (true) {
    RatFunc x(rpoly(false), rpoly(true));
    if (!nonzero || !x.is_zero()) return x;
  }
}

}  // namespace

TEST_CASE("local isotropy examples") {
  FqtField K = FqtField::with_order(3);
  const auto vt = K.parse_place("finite:t");
  const RatFunc u = K.from_int(-1);  // nonsquare residue unit at (t)

  // hyperbolic plane splits everywhere
  for (const auto& v : {vt, K.parse_place("finite:t+1"), K.parse_place("infinite")})
    CHECK(local_isotropic(K, v, DiagForm<FqtField>{{K.one(), -K.one()}}));

  // <1, -u> with u a nonsquare unit: anisotropic at (t), by the square test
  CHECK(!K.is_local_square(vt, u));
  CHECK(!local_isotropic(K, vt, DiagForm<FqtField>{{K.one(), -u}}));

  // anisotropic rank-4 norm form <1, -u, -t, ut>, cross-checked by the oracle
  DiagForm<FqtField> norm{{K.one(), -u, -K.t(), u * K.t()}};
  CHECK(!local_isotropic(K, vt, norm));
  CHECK(!oracle_isotropic(K, vt, norm.coeffs));
  // the same form is isotropic at a place where H(u, t) splits
  const auto vt1 = K.parse_place("finite:t+1");
  CHECK(hilbert_symbol(K, vt1, u, K.t()) == 1);
  CHECK(local_isotropic(K, vt1, norm));
  CHECK(oracle_isotropic(K, vt1, norm.coeffs));

  RationalField Q;
  CHECK(!local_isotropic(Q, Q.parse_place("real"),
                         DiagForm<RationalField>{{Q.one(), Q.one(), Q.one(), Q.one()}}));
  CHECK(local_isotropic(Q, Q.parse_place("real"),
                        DiagForm<RationalField>{{Q.one(), Q.one(), -Q.one()}}));
  // rank 4 at an odd place and at 2
  DiagForm<RationalField> ham{{Q.one(), Q.one(), Q.one(), Q.one()}};  // norm of H(-1,-1)
  CHECK(!local_isotropic(Q, Q.parse_place("prime:2"), ham));
  CHECK(local_isotropic(Q, Q.parse_place("prime:3"), ham));
}

TEST_CASE("rank-4 criterion agrees with the enumeration oracle") {
  FqtField K = FqtField::with_order(3);
  std::mt19937 rng(311);
  std::vector<FqtField::Place> places = {K.parse_place("finite:t"),
                                         K.parse_place("finite:t+1"),
                                         K.parse_place("finite:t^2+1")};
  int checked = 0;
  for (int it = 0; checked < 25; ++it) {
    const auto& v = places[it % places.size()];
    DiagForm<FqtField> f{{rnd(K, 1, rng, true), rnd(K, 1, rng, true), rnd(K, 1, rng, true),
                          rnd(K, 1, rng, true)}};
    CHECK(local_isotropic(K, v, f) == oracle_isotropic(K, v, f.coeffs));
    ++checked;
  }

  RationalField Q;
  std::uniform_int_distribution<long> dn(-6, 6);
  std::vector<RationalField::Place> qplaces = {Q.parse_place("prime:3"),
                                               Q.parse_place("prime:5")};
  checked = 0;
  for (int it = 0; checked < 25; ++it) {
    const auto& v = qplaces[it % qplaces.size()];
    long a = dn(rng), b = dn(rng), c = dn(rng), d = dn(rng);
    if (!a || !b || !c || !d) continue;
    DiagForm<RationalField> f{{Q.from_int(a), Q.from_int(b), Q.from_int(c), Q.from_int(d)}};
    CHECK(local_isotropic(Q, v, f) == oracle_isotropic(Q, v, f.coeffs));
    ++checked;
  }
}

TEST_CASE("isotropy invariances") {
  FqtField K = FqtField::with_order(3);
  std::mt19937 rng(313);
  const auto vt = K.parse_place("finite:t");
  for (int it = 0; it < 40; ++it) {
    DiagForm<FqtField> f{{rnd(K, 1, rng, true), rnd(K, 1, rng, true), rnd(K, 1, rng, true)}};
    const bool iso = local_isotropic(K, vt, f);

    DiagForm<FqtField> perm = f;
    std::shuffle(perm.coeffs.begin(), perm.coeffs.end(), rng);
    CHECK(local_isotropic(K, vt, perm) == iso);
    CHECK(hasse_symbol(K, vt, perm) == hasse_symbol(K, vt, f));

    DiagForm<FqtField> scaled = f;
    const RatFunc s = rnd(K, 1, rng, true);
    scaled.coeffs[it % 3] = scaled.coeffs[it % 3] * s * s;
    CHECK(local_isotropic(K, vt, scaled) == iso);
  }
}

TEST_CASE("local representability") {
  FqtField K = FqtField::with_order(3);
  const auto vt = K.parse_place("finite:t");
  const RatFunc u = K.from_int(-1);
  std::mt19937 rng(317);
  // <1> represents any square
  for (int it = 0; it < 20; ++it) {
    RatFunc s = rnd(K, 2, rng, true);
    CHECK(local_represents(K, vt, DiagForm<FqtField>{{K.one()}}, s * s));
  }
  // <1> does not represent the nonsquare unit u; the local square test decides
  CHECK(!local_represents(K, vt, DiagForm<FqtField>{{K.one()}}, u));
  // <1, -u> is the norm form of the unramified quadratic extension: it
  // represents every unit (u included), but nothing of odd valuation
  CHECK(local_represents(K, vt, DiagForm<FqtField>{{K.one(), -u}}, u));
  CHECK(local_solvability_oracle(K, vt, {K.one(), -u}, u));
  CHECK(!local_represents(K, vt, DiagForm<FqtField>{{K.one(), -u}}, K.t()));
  CHECK(!local_solvability_oracle(K, vt, {K.one(), -u}, K.t()));
  CHECK_THROWS_AS(local_represents(K, vt, DiagForm<FqtField>{{K.one()}}, K.zero()),
                  ArgumentError);
}

TEST_CASE("global representability examples") {
  RationalField Q;
  DiagForm<RationalField> f{{Q.one(), Q.one()}};
  CHECK(global_represents(Q, f, Q.from_int(2)));
  CHECK(!global_represents(Q, f, Q.from_int(-1)));  // real obstruction
  CHECK(global_represents(Q, DiagForm<RationalField>{{Q.one(), Q.one(), Q.one()}},
                          Q.from_int(3)));
  // 7 is not a sum of three squares... but of four; rank-3 check
  CHECK(!global_represents(Q, DiagForm<RationalField>{{Q.one(), Q.one(), Q.one()}},
                           Q.from_int(7)));
}

TEST_CASE("witness search") {
  FqtField K = FqtField::with_order(3);
  RationalField Q;

  auto w = witness_search(Q, DiagForm<RationalField>{{Q.one(), -Q.one()}}, Q.zero(), 1);
  REQUIRE(w.has_value());
  CHECK((*w)[0] == BigRational(1));
  CHECK((*w)[1] == BigRational(1));

  CHECK(!witness_search(Q, DiagForm<RationalField>{{Q.one(), Q.one()}}, Q.from_int(-1), 6)
             .has_value());

  auto w2 = witness_search(Q, DiagForm<RationalField>{{Q.one(), Q.one()}}, Q.from_int(2), 2);
  REQUIRE(w2.has_value());

  auto w3 = witness_search(K, DiagForm<FqtField>{{K.one(), -K.t()}}, K.zero() - K.t(), 1);
  REQUIRE(w3.has_value());  // 0^2 - t*1^2 = -t
}

TEST_CASE("witness search agrees with global_represents on random ternary forms") {
  FqtField K = FqtField::with_order(3);
  std::mt19937 rng(331);
  int found = 0;
  for (int it = 0; it < 100; ++it) {
    DiagForm<FqtField> f{{rnd(K, 1, rng, true), rnd(K, 1, rng, true), rnd(K, 1, rng, true)}};
    RatFunc c = rnd(K, 2, rng, true);
    if (auto w = witness_search(K, f, c, 1)) {
      CHECK(global_represents(K, f, c));
      ++found;
    }
  }
  CHECK(found > 10);  // the sample is not vacuous
}
