#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "diodef/diophdef.hpp"
#include "diodef/harness.hpp"
#include "diodef/quaternion.hpp"

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

TEST_CASE("build_definition over F_3(t) at (t)") {
  FqtField K = FqtField::with_order(3);
  const auto vt = K.parse_place("finite:t");
  auto def = build_definition(K, vt);

  CHECK(K.place_to_string(def.copies[0].helper) == "finite:t+1");
  CHECK(K.place_to_string(def.copies[1].helper) == "finite:t+2");

  for (const auto& copy : def.copies) {
    CHECK(K.ord(vt, copy.p) == 1);
    CHECK(K.ord(copy.helper, copy.p) == 0);
    CHECK(K.ord(vt, copy.q) == 0);
    CHECK(K.ord(copy.helper, copy.q) == 1);
    auto ram = ram_set(K, copy.a, copy.b);
    REQUIRE(ram.ram.size() == 2);
    CHECK((ram.ram[0] == vt || ram.ram[1] == vt));
    CHECK((ram.ram[0] == copy.helper || ram.ram[1] == copy.helper));
    CHECK(copy.r == 1);
    CHECK(copy.coset_reps.size() == 81);  // 3^(r+1) * 3^(r+1)
  }

  CHECK_THROWS_AS(build_definition(K, K.parse_place("infinite")), ArgumentError);
  FqtField K2 = FqtField::with_order(2);
  CHECK_THROWS_AS(build_definition(K2, K2.parse_place("finite:t")), ArgumentError);
}

TEST_CASE("build_definition over Q at 5") {
  RationalField Q;
  const auto v5 = Q.parse_place("prime:5");
  auto def = build_definition(Q, v5);
  CHECK(def.copies[0].helper == Q.parse_place("prime:3"));
  CHECK(def.copies[1].helper == Q.parse_place("prime:7"));
  for (const auto& copy : def.copies) {
    CHECK(Q.ord(v5, copy.p) == 1);
    CHECK(Q.ord(copy.helper, copy.q) == 1);
    auto ram = ram_set(Q, copy.a, copy.b);
    CHECK(ram.ram.size() == 2);
  }
  CHECK(def.copies[0].coset_reps.size() == 225);
  CHECK(def.copies[1].coset_reps.size() == 1225);
  CHECK_THROWS_AS(build_definition(Q, Q.parse_place("prime:2")), ArgumentError);
  // coset cap produces an honest refusal
  SearchLimits tiny;
  tiny.coset_cap = 10;
  CHECK_THROWS_AS(build_definition(Q, v5, tiny), SearchBoundError);
}

TEST_CASE("rescaling exponent bounds integral-quaternion coordinates") {
  FqtField K = FqtField::with_order(3);
  const auto vt = K.parse_place("finite:t");
  auto def = build_definition(K, vt);
  const auto& copy = def.copies[0];
  QuatAlgebra<RatFunc> A(copy.a, copy.b, QuatPresentation::OddChar);
  std::mt19937 rng(401);
  int confirmed = 0;
  for (int it = 0; it < 4000 && confirmed < 25; ++it) {
    // random coordinates with denominators up to pi^2 at both places
    auto coord = [&] {
      RatFunc x = rnd(K, 1, rng);
      std::uniform_int_distribution<int> de(0, 2);
      x = x / elem_pow(K, copy.p, de(rng));
      x = x / elem_pow(K, copy.q, de(rng));
      return x;
    };
    QuatElem<RatFunc> zq{{coord(), coord(), coord(), coord()}};
    const RatFunc nr = reduced_norm(A, zq);
    if (is_zero(nr)) continue;
    for (const auto& v : {vt, copy.helper}) {
      if (!K.ord_at_least(v, nr, 0)) continue;
      const RatFunc scale = elem_pow(K, K.uniformizer(v), copy.r);
      for (const auto& c : zq.c)
        CHECK(K.ord_at_least(v, scale * c, 0));
      ++confirmed;
    }
  }
  CHECK(confirmed >= 25);
}

TEST_CASE("t_membership examples") {
  FqtField K = FqtField::with_order(3);
  const auto vt = K.parse_place("finite:t");
  auto def = build_definition(K, vt);
  const auto& copy = def.copies[0];
  const RatFunc pq = copy.p * copy.q;

  // pq itself lies in pR_p cap qR_q, hence in T
  CHECK(t_membership(K, vt, copy, pq));
  // too singular at the target place
  CHECK(!t_membership(K, vt, copy, K.one() / elem_pow(K, copy.p, copy.r + 1)));
  // x1 = 0 is decided, and the verdict survives the witness search cross-check
  const bool zero_in = t_membership(K, vt, copy, K.zero());
  DiagForm<FqtField> ternary{{copy.a, copy.b, -(copy.a * copy.b)}};
  auto w = witness_search(K, ternary, -pq, 1);
  if (w.has_value()) CHECK(zero_in);

  RationalField Q;
  auto defq = build_definition(Q, Q.parse_place("prime:5"));
  const auto& copyq = defq.copies[0];
  CHECK(t_membership(Q, defq.target, copyq, copyq.p * copyq.q));
  CHECK(!t_membership(Q, defq.target, copyq, make_rational(1, 25)));
}

TEST_CASE("rpq membership matches direct ord checks") {
  FqtField K = FqtField::with_order(3);
  const auto vt = K.parse_place("finite:t");
  auto def = build_definition(K, vt);
  const auto& copy = def.copies[0];

  CHECK(rpq_membership(K, vt, copy, K.zero()));
  CHECK(!rpq_membership(K, vt, copy, K.one() / copy.p));
  CHECK(!rpq_membership(K, vt, copy, K.one() / copy.q));

  for (const auto& x : enumerate_elements(K, 1)) {
    const bool direct = K.ord_at_least(vt, x, 0) && K.ord_at_least(copy.helper, x, 0);
    CHECK(rpq_membership(K, vt, copy, x) == direct);
  }
}

TEST_CASE("decide equals integrality, small exhaustive sweep") {
  FqtField K = FqtField::with_order(3);
  const auto vt = K.parse_place("finite:t");
  auto def = build_definition(K, vt);

  CHECK(decide(K, def, K.t()).verdict);
  CHECK(!decide(K, def, K.one() / K.t()).verdict);

  for (const auto& x : enumerate_elements(K, 1))
    CHECK(decide(K, def, x).verdict == K.ord_at_least(vt, x, 0));

  RationalField Q;
  auto defq = build_definition(Q, Q.parse_place("prime:5"));
  for (const auto& x : enumerate_elements(Q, 10))
    CHECK(decide(Q, defq, x).verdict == Q.ord_at_least(defq.target, x, 0));
}

TEST_CASE("coset representatives are pairwise incongruent and cover") {
  FqtField K = FqtField::with_order(3);
  const auto vt = K.parse_place("finite:t");
  auto def = build_definition(K, vt);
  const auto& copy = def.copies[0];
  // pairwise incongruence mod G = p^(r+1) R_p cap q^(r+1) R_q (sampled)
  std::mt19937 rng(409);
  std::uniform_int_distribution<size_t> di(0, copy.coset_reps.size() - 1);
  for (int it = 0; it < 200; ++it) {
    const size_t i = di(rng), j = di(rng);
    if (i == j) continue;
    const RatFunc d = copy.coset_reps[i] - copy.coset_reps[j];
    const bool in_g = K.ord_at_least(vt, d, copy.r + 1) &&
                      K.ord_at_least(copy.helper, d, copy.r + 1);
    CHECK(!in_g);
  }
  // covering: every bounded-height member of R_p cap R_q lands in some coset
  for (const auto& x : enumerate_elements(K, 1)) {
    if (!(K.ord_at_least(vt, x, 0) && K.ord_at_least(copy.helper, x, 0))) continue;
    bool covered = false;
    for (const auto& s : copy.coset_reps) {
      const RatFunc d = x - s;
      if (K.ord_at_least(vt, d, copy.r + 1) && K.ord_at_least(copy.helper, d, copy.r + 1))
        covered = true;
    }
    CHECK(covered);
  }
}

TEST_CASE("emitted formula structure and witness evaluation") {
  FqtField K = FqtField::with_order(3);
  const auto vt = K.parse_place("finite:t");
  auto def = build_definition(K, vt);

  // Or-width equals the coset count in each copy
  const auto& root = def.formula;
  REQUIRE(root.kind == FormulaNode<FqtField>::Kind::Exists);
  const auto& conj = root.children[0];
  REQUIRE(conj.children.size() == 3);
  CHECK(conj.children[1].children.size() == def.copies[0].coset_reps.size());
  CHECK(conj.children[2].children.size() == def.copies[1].coset_reps.size());

  // witness-checking evaluation on a decided member
  const RatFunc x = K.zero();
  auto tr = decide(K, def, x);
  REQUIRE(tr.verdict);
  std::map<std::string, RatFunc> env;
  env["x"] = x;
  env["y"] = tr.y;
  env["z"] = tr.z;
  const std::string wname[2] = {"y", "z"};
  const RatFunc wval[2] = {tr.y, tr.z};
  for (int c = 0; c < 2; ++c) {
    const auto& copy = def.copies[c];
    REQUIRE(tr.copy[c].coset_hit.has_value());
    const size_t k = *tr.copy[c].coset_hit;
    const RatFunc pq = copy.p * copy.q;
    const RatFunc x1 = (wval[c] - copy.coset_reps[k]) / elem_pow(K, pq, copy.r);
    DiagForm<FqtField> ternary{{copy.a, copy.b, -(copy.a * copy.b)}};
    auto w = witness_search(K, ternary, x1 * x1 - pq, 2);
    REQUIRE(w.has_value());
    const std::string base = wname[c] + "_k" + std::to_string(k) + "_x";
    env[base + "1"] = x1;
    env[base + "2"] = (*w)[0];
    env[base + "3"] = (*w)[1];
    env[base + "4"] = (*w)[2];
  }
  CHECK(formula_witnessed(K, def.formula, env));
  // and a wrong witness fails
  env["y"] = tr.y + K.one();
  CHECK(!formula_witnessed(K, def.formula, env));
}

TEST_CASE("char-2 formula emission") {
  FqtField K = FqtField::with_order(2);
  const RatFunc a = K.t(), b = K.t() + K.one(), p = K.t(), q = K.t() + K.one();
  auto node = emit_formula_char2(K, a, b, p, q);
  REQUIRE(node.kind == FormulaNode<FqtField>::Kind::Exists);
  CHECK(node.vars == std::vector<std::string>{"x1", "x2", "x4"});
  const auto& eq = node.children[0];
  REQUIRE(eq.kind == FormulaNode<FqtField>::Kind::Eq);
  // free variable is x3, the trace coordinate
  auto vars = eq.poly.variables();
  CHECK(std::find(vars.begin(), vars.end(), "x3") != vars.end());

  // evaluating the polynomial at quaternion coordinates reproduces nr - pq
  QuatAlgebra<RatFunc> A(a, b, QuatPresentation::Char2);
  std::mt19937 rng(419);
  for (int it = 0; it < 50; ++it) {
    QuatElem<RatFunc> zq{{rnd(K, 2, rng), rnd(K, 2, rng), rnd(K, 2, rng), rnd(K, 2, rng)}};
    std::map<std::string, RatFunc> env{{"x1", zq.c[0]}, {"x2", zq.c[1]},
                                       {"x3", zq.c[2]}, {"x4", zq.c[3]}};
    CHECK(eq.poly.eval(K, env) == reduced_norm(A, zq) - p * q);
  }

  FqtField K3 = FqtField::with_order(3);
  CHECK_THROWS_AS(emit_formula_char2(K3, K3.t(), K3.one(), K3.t(), K3.one()),
                  ArgumentError);
}
