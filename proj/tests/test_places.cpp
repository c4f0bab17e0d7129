#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "diodef/places.hpp"

using namespace diodef;

namespace {

RatFunc rnd_elem(const FqtField& K, long maxdeg, std::mt19937& rng) {
  const auto& F = K.constants();
  std::uniform_int_distribution<int> dd(0, static_cast<int>(maxdeg));
  auto rpoly = [&](bool nonzero) {
    while (true) {
      const int deg = dd(rng);
      std::vector<FFElem> cs;
      std::uniform_int_distribution<std::uint64_t> dc(0, F->order() - 1);
      for (int i = 0; i <= deg; ++i) cs.push_back(F->from_index(dc(rng)));
      Poly f(F, std::move(cs));
      if (!nonzero || !f.is_zero()) return f;
    }
  };
  return RatFunc(rpoly(false), rpoly(true));
}

}  // namespace

TEST_CASE("ord examples") {
  FqtField K = FqtField::with_order(3);
  const auto vt = K.parse_place("finite:t");
  const auto vinf = K.parse_place("infinite");
  const RatFunc x = K.parse("(t^2)/(t+1)");
  CHECK(K.ord(vt, x) == 2);
  CHECK(K.ord(vinf, K.parse("(t^2+1)/(t^5)")) == 3);
  CHECK(!K.ord(vt, K.zero()).has_value());

  RationalField Q;
  CHECK(Q.ord(Q.parse_place("prime:5"), Q.parse("50/3")) == 2);
  CHECK_THROWS_AS(Q.ord(Q.parse_place("real"), Q.one()), ArgumentError);
}

TEST_CASE("ord is additive") {
  FqtField K = FqtField::with_order(3);
  std::mt19937 rng(17);
  const auto v = K.parse_place("finite:t^2+1");
  const auto vinf = K.parse_place("infinite");
  for (int it = 0; it < 100; ++it) {
    RatFunc a = rnd_elem(K, 3, rng), b = rnd_elem(K, 3, rng);
    if (a.is_zero() || b.is_zero()) continue;
    CHECK(*K.ord(v, a * b) == *K.ord(v, a) + *K.ord(v, b));
    CHECK(*K.ord(vinf, a * b) == *K.ord(vinf, a) + *K.ord(vinf, b));
  }
}

TEST_CASE("residues") {
  FqtField K = FqtField::with_order(3);
  const auto vt = K.parse_place("finite:t");
  const auto vt1 = K.parse_place("finite:t+1");
  CHECK(K.residue(vt, K.parse("(t+2)/(t+1)")) == K.constants()->from_int(2));
  CHECK(K.residue(vt1, K.t()) == K.constants()->from_int(2));
  CHECK_THROWS_AS(K.residue(vt, K.parse("1/t")), ArgumentError);

  // residue field of a degree-2 place
  const auto v2 = K.parse_place("finite:t^2+1");
  auto k2 = K.residue_field(v2);
  CHECK(k2->order() == 9);
  FFElem r = K.residue(v2, K.t());
  CHECK(r * r == k2->from_int(-1));

  RationalField Q;
  const auto v7 = Q.parse_place("prime:7");
  // 10/3 mod 7: 3^(-1) = 5, 10*5 = 50 = 1 mod 7
  CHECK(Q.residue(v7, Q.parse("10/3")) == Q.residue_field(v7)->from_int(1));
}

TEST_CASE("product formula over F_q(t)") {
  FqtField K = FqtField::with_order(3);
  std::mt19937 rng(29);
  const auto vinf = K.parse_place("infinite");
  for (int it = 0; it < 40; ++it) {
    RatFunc x = rnd_elem(K, 4, rng);
    if (x.is_zero()) continue;
    long total = *K.ord(vinf, x) * 1;
    for (const auto& v : K.support(x)) total += *K.ord(v, x) * v.deg();
    CHECK(total == 0);
  }
}

TEST_CASE("approximate") {
  FqtField K = FqtField::with_order(3);
  const auto vt = K.parse_place("finite:t");
  const auto vt1 = K.parse_place("finite:t+1");

  SUBCASE("ord targets") {
    RatFunc x = K.approximate({FqtField::Target::exact_ord(vt, 1),
                               FqtField::Target::exact_ord(vt1, 0)});
    CHECK(K.ord(vt, x) == 1);
    CHECK(K.ord(vt1, x) == 0);
    CHECK(x == K.t());  // minimal representative
  }

  SUBCASE("residue targets") {
    RatFunc x = K.approximate(
        {FqtField::Target::congruent(vt, K.from_int(2)),
         FqtField::Target::congruent(vt1, K.zero())});
    CHECK(K.residue(vt, x) == K.constants()->from_int(2));
    CHECK(K.residue(vt1, x).is_zero());
  }

  SUBCASE("negative ord") {
    RatFunc x = K.approximate({FqtField::Target::exact_ord(vt, -2),
                               FqtField::Target::exact_ord(vt1, 1)});
    CHECK(K.ord(vt, x) == -2);
    CHECK(K.ord(vt1, x) == 1);
  }

  SUBCASE("congruence to a non-integral value") {
    const RatFunc c = K.parse("(t+1)/(t^2)");
    RatFunc x = K.approximate({FqtField::Target::congruent(vt, c, 1)});
    CHECK(K.ord_at_least(vt, x - c, 1));
  }

  SUBCASE("duplicate places rejected") {
    CHECK_THROWS_AS(K.approximate({FqtField::Target::exact_ord(vt, 1),
                                   FqtField::Target::exact_ord(vt, 0)}),
                    ArgumentError);
  }

  RationalField Q;
  SUBCASE("rational targets") {
    const auto v5 = Q.parse_place("prime:5");
    const auto v7 = Q.parse_place("prime:7");
    BigRational x = Q.approximate({RationalField::Target::exact_ord(v5, 1),
                                   RationalField::Target::exact_ord(v7, 0)});
    CHECK(Q.ord(v5, x) == 1);
    CHECK(Q.ord(v7, x) == 0);
    CHECK(x == BigRational(5));
  }
}

TEST_CASE("approximate round trip on random targets") {
  FqtField K = FqtField::with_order(3);
  std::mt19937 rng(31);
  const auto vt = K.parse_place("finite:t");
  const auto vt1 = K.parse_place("finite:t+1");
  const auto vt2 = K.parse_place("finite:t+2");
  std::uniform_int_distribution<long> de(-2, 2);
  for (int it = 0; it < 30; ++it) {
    auto targets = std::vector<FqtField::Target>{
        FqtField::Target::exact_ord(vt, de(rng)),
        FqtField::Target::exact_ord(vt1, de(rng)),
        FqtField::Target::min_ord(vt2, std::max(0L, de(rng)))};
    RatFunc x = K.approximate(targets);
    CHECK(K.ord(vt, x) == targets[0].ord);
    CHECK(K.ord(vt1, x) == targets[1].ord);
    CHECK(K.ord_at_least(vt2, x, targets[2].ord));
  }
}

TEST_CASE("local squares") {
  FqtField K = FqtField::with_order(3);
  const auto vt = K.parse_place("finite:t");
  CHECK(!K.is_local_square(vt, K.t()));
  CHECK(K.is_local_square(vt, K.one() + K.t()));
  CHECK_THROWS_AS(K.is_local_square(vt, K.zero()), ArgumentError);

  // the infinite place is nonarchimedean with uniformizer 1/t
  const auto vinf = K.parse_place("infinite");
  CHECK(K.is_local_square(vinf, K.one() / (K.t() * K.t())));
  CHECK(!K.is_local_square(vinf, K.t()));
  CHECK(!K.is_local_square(vinf, K.from_int(2)));  // nonsquare constant

  FqtField K2 = FqtField::with_order(2);
  CHECK_THROWS_AS(K2.is_local_square(K2.parse_place("finite:t"), K2.one()),
                  ArgumentError);

  RationalField Q;
  CHECK(!Q.is_local_square(Q.parse_place("real"), Q.from_int(-1)));
  CHECK(Q.is_local_square(Q.parse_place("real"), Q.from_int(2)));
  const auto v2 = Q.parse_place("prime:2");
  CHECK(Q.is_local_square(v2, Q.from_int(17)));   // 17 = 1 mod 8
  CHECK(!Q.is_local_square(v2, Q.from_int(3)));
  CHECK(!Q.is_local_square(v2, Q.from_int(2)));
  const auto v5 = Q.parse_place("prime:5");
  CHECK(Q.is_local_square(v5, Q.from_int(4)));
  CHECK(!Q.is_local_square(v5, Q.from_int(2)));

  // invariance under multiplication by squares
  std::mt19937 rng(37);
  for (int it = 0; it < 50; ++it) {
    RatFunc x = rnd_elem(K, 3, rng), u = rnd_elem(K, 3, rng);
    if (x.is_zero() || u.is_zero()) continue;
    CHECK(K.is_local_square(vt, x * x * u) == K.is_local_square(vt, u));
  }
}

TEST_CASE("split_at gives a two-place-supported decomposition") {
  FqtField K = FqtField::with_order(3);
  std::mt19937 rng(41);
  const auto vt = K.parse_place("finite:t");
  for (int it = 0; it < 60; ++it) {
    RatFunc x = rnd_elem(K, 4, rng);
    auto [sing, rest] = K.split_at(vt, x);
    CHECK(sing + rest == x);
    CHECK(K.ord_at_least(vt, rest, 0));
    if (!sing.is_zero()) {
      // the singular part has denominator a power of t only
      for (const auto& w : K.support(sing))
        if (!(w == vt)) CHECK(K.ord_at_least(w, sing, 0));
    }
  }

  RationalField Q;
  const auto v5 = Q.parse_place("prime:5");
  auto [s, r] = Q.split_at(v5, Q.parse("7/50"));
  CHECK(s + r == Q.parse("7/50"));
  CHECK(Q.ord_at_least(v5, r, 0));
  CHECK(Q.ord_at_least(Q.parse_place("prime:2"), s, 0));
}

TEST_CASE("helper place enumeration") {
  FqtField K = FqtField::with_order(3);
  const auto vt = K.parse_place("finite:t");
  auto v = K.next_finite_place({vt});
  CHECK(K.place_to_string(v) == "finite:t+1");
  auto w = K.next_finite_place({vt, v});
  CHECK(K.place_to_string(w) == "finite:t+2");

  RationalField Q;
  CHECK(Q.next_finite_place({}) == Q.parse_place("prime:3"));
  CHECK(Q.next_finite_place({Q.parse_place("prime:3")}) == Q.parse_place("prime:5"));
}

TEST_CASE("t -> 1/t automorphism swaps (t) with infinity") {
  FqtField K = FqtField::with_order(3);
  std::mt19937 rng(43);
  const auto vt = K.parse_place("finite:t");
  const auto vinf = K.parse_place("infinite");
  for (int it = 0; it < 50; ++it) {
    RatFunc x = rnd_elem(K, 3, rng);
    if (x.is_zero()) continue;
    RatFunc y = K.invert_t(x);
    CHECK(*K.ord(vt, y) == *K.ord(vinf, x));
    CHECK(*K.ord(vinf, y) == *K.ord(vt, x));
    CHECK(K.invert_t(y) == x);
  }
}

TEST_CASE("element enumeration counts") {
  FqtField K = FqtField::with_order(3);
  auto e0 = K.elements_of_height_at_most(0);
  CHECK(e0.size() == 3);
  auto e1 = K.elements_of_height_at_most(1);
  // double count: brute force over all canonical (num, den) pairs
  size_t expected = 0;
  for (const auto& g : {K.parse("1"), K.parse("t"), K.parse("t+1"), K.parse("t+2")}) {
    for (int i = 0; i < 9; ++i) {
      std::vector<FFElem> cs = {K.constants()->from_index(i % 3),
                                K.constants()->from_index(i / 3)};
      Poly f(K.constants(), cs);
      if (poly_gcd(f, g.num()).is_one()) ++expected;
    }
  }
  CHECK(e1.size() == expected);
  for (const auto& x : e1) CHECK(x.height() <= 1);

  RationalField Q;
  auto r2 = Q.elements_of_height_at_most(2);
  CHECK(r2.size() == 7);  // {0, 1, -1, 2, -2, 1/2, -1/2}
  bool has_zero = false, has_half = false;
  for (const auto& x : r2) {
    if (sgn(x) == 0) has_zero = true;
    if (x == make_rational(1, 2)) has_half = true;
  }
  CHECK(has_zero);
  CHECK(has_half);
}

TEST_CASE("place literals round trip") {
  FqtField K = FqtField::with_order(3);
  for (const std::string s : {"finite:t", "finite:t^2+1", "infinite"})
    CHECK(K.place_to_string(K.parse_place(s)) == s);
  CHECK_THROWS_AS(K.parse_place("finite:t^2+2*t+1"), ArgumentError);  // reducible

  RationalField Q;
  for (const std::string s : {"prime:5", "real"})
    CHECK(Q.place_to_string(Q.parse_place(s)) == s);
  CHECK_THROWS_AS(Q.parse_place("prime:6"), ArgumentError);
}
