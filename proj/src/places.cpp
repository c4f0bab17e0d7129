#include "diodef/places.hpp"

#include <algorithm>

namespace diodef {

namespace {

template <class Place>
void require_distinct_places(const std::vector<Place>& places) {
  for (size_t i = 0; i < places.size(); ++i)
    for (size_t j = i + 1; j < places.size(); ++j)
      if (places[i] == places[j])
        throw ArgumentError("approximation targets repeat a place");
}

bool parity_even(long e) { return (e % 2) == 0; }

}  // namespace

// ===========================================================================
// FqtField
// ===========================================================================

FqtField::Place FqtField::Place::finite(Poly pi) {
  pi = pi.monic();
  if (pi.degree() < 1 || !pi.is_irreducible())
    throw ArgumentError("finite place requires a monic irreducible polynomial");
  Place v;
  v.kind = Kind::Finite;
  v.pi = std::move(pi);
  return v;
}

FqtField::FqtField(FFPtr constants) : constants_(std::move(constants)) {
  if (!constants_) throw ArgumentError("null constants field");
}

std::optional<long> FqtField::ord(const Place& v, const Elem& x) const {
  if (x.is_zero()) return std::nullopt;
  if (!v.is_finite()) return x.den().degree() - x.num().degree();
  return *poly_ord(x.num(), v.pi) - *poly_ord(x.den(), v.pi);
}

bool FqtField::ord_at_least(const Place& v, const Elem& x, long k) const {
  const auto e = ord(v, x);
  return !e || *e >= k;
}

FqtField::Elem FqtField::uniformizer(const Place& v) const {
  if (v.is_finite()) return RatFunc(v.pi);
  return one() / t();
}

std::uint64_t FqtField::residue_size(const Place& v) const {
  std::uint64_t s = 1;
  for (unsigned i = 0; i < v.deg(); ++i) s *= q();
  return s;
}

FFPtr FqtField::residue_field(const Place& v) const {
  if (!v.is_finite() || v.deg() == 1) return constants_;
  if (constants_->degree() != 1)
    throw ArgumentError(
        "residue fields of higher-degree places are supported over prime "
        "constants fields only");
  std::vector<std::uint32_t> mod;
  mod.reserve(v.pi.degree() + 1);
  for (int i = 0; i <= v.pi.degree(); ++i)
    mod.push_back(static_cast<std::uint32_t>(v.pi.coeff(i).index()));
  return FiniteField::with_modulus(constants_->characteristic(), std::move(mod));
}

FFElem FqtField::residue(const Place& v, const Elem& x) const {
  if (!ord_at_least(v, x, 0)) throw ArgumentError("residue of a non-integral element");
  if (x.is_zero()) return residue_field(v)->zero();
  if (!v.is_finite()) {
    if (*ord(v, x) > 0) return constants_->zero();
    return x.num().leading_coeff();  // denominator is monic
  }
  if (v.deg() == 1) {
    const FFElem root = -v.pi.coeff(0);
    return x.num().eval(root) / x.den().eval(root);
  }
  const FFPtr k = residue_field(v);
  const Poly r = mod_power(v, x, 1);
  std::vector<std::uint32_t> coeffs;
  coeffs.reserve(r.degree() + 1);
  for (int i = 0; i <= r.degree(); ++i)
    coeffs.push_back(static_cast<std::uint32_t>(r.coeff(i).index()));
  return k->element(std::move(coeffs));
}

Poly FqtField::mod_power(const Place& v, const Elem& x, long k) const {
  if (!v.is_finite()) throw ArgumentError("mod_power needs a finite place");
  if (k < 1) throw ArgumentError("mod_power needs k >= 1");
  if (!ord_at_least(v, x, 0)) throw ArgumentError("mod_power of a non-integral element");
  const Poly M = v.pi.pow(static_cast<std::uint64_t>(k));
  const Poly f = x.num() % M;
  const Poly g = x.den() % M;
  // invert g mod M (g is coprime to pi because x is canonical and integral)
  Poly r0 = M, r1 = g;
  Poly s0(constants_), s1 = Poly::constant(constants_->one());
  while (!r1.is_zero()) {
    auto [qt, r2] = Poly::divmod(r0, r1);
    Poly s2 = s0 - qt * s1;
    r0 = std::move(r1);
    r1 = std::move(r2);
    s0 = std::move(s1);
    s1 = std::move(s2);
  }
  if (r0.degree() != 0) throw VerificationError("denominator not invertible mod pi^k");
  return (f * s0.scaled(r0.coeff(0).inv())) % M;
}

std::vector<Poly> FqtField::residue_system(const Place& v, long k) const {
  if (!v.is_finite() || k < 1) throw ArgumentError("residue_system needs a finite place, k >= 1");
  const unsigned digits = static_cast<unsigned>(k) * v.deg();
  std::uint64_t count = 1;
  for (unsigned i = 0; i < digits; ++i) {
    if (count > 50'000'000 / q()) throw SearchBoundError("residue system too large");
    count *= q();
  }
  std::vector<Poly> out;
  out.reserve(count);
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    std::vector<FFElem> cs;
    std::uint64_t w = idx;
    for (unsigned i = 0; i < digits; ++i) {
      cs.push_back(constants_->from_index(w % q()));
      w /= q();
    }
    out.emplace_back(constants_, std::move(cs));
  }
  return out;
}

bool FqtField::is_local_square(const Place& v, const Elem& x) const {
  if (x.is_zero()) throw ArgumentError("local square test on zero");
  if (!odd_characteristic())
    throw ArgumentError("local square test unsupported in residue characteristic 2");
  const long e = *ord(v, x);
  if (!parity_even(e)) return false;
  const Elem u = x * uniformizer(v).pow(-e);
  return quadratic_character(residue(v, u)) == 1;
}

FqtField::Elem FqtField::approximate(const std::vector<Target>& targets) const {
  if (targets.empty()) throw ArgumentError("approximation needs at least one target");
  std::vector<Place> places;
  for (const auto& tg : targets) {
    if (!tg.place.is_finite())
      throw ArgumentError("approximation at the infinite place is not supported");
    places.push_back(tg.place);
  }
  require_distinct_places(places);

  // Denominator depth per target, then congruence data on X = x * D.
  std::vector<long> depth(targets.size(), 0);
  Poly D = Poly::constant(constants_->one());
  for (size_t i = 0; i < targets.size(); ++i) {
    const auto& tg = targets[i];
    long need = 0;
    if (tg.kind == TargetKind::ExactOrd && tg.ord < 0) need = -tg.ord;
    if (tg.kind == TargetKind::Congruence && !tg.value.is_zero()) {
      const long vv = *ord(tg.place, tg.value);
      if (vv < 0) need = std::max(need, -vv);
    }
    depth[i] = need;
    D = D * tg.place.pi.pow(static_cast<std::uint64_t>(need));
  }
  const Elem Dq = RatFunc(D);

  struct Cong {
    Poly modulus;
    Poly base;       // fixed part of the residue
    Poly unit_step;  // ExactOrd: residue = unit * unit_step; otherwise unused
    bool has_unit = false;
    const Place* place;
  };
  std::vector<Cong> congs;
  for (size_t i = 0; i < targets.size(); ++i) {
    const auto& tg = targets[i];
    const long d = depth[i];
    Cong c;
    c.place = &tg.place;
    switch (tg.kind) {
      case TargetKind::ExactOrd: {
        const long e = tg.ord + d;
        c.modulus = tg.place.pi.pow(static_cast<std::uint64_t>(e + 1));
        c.unit_step = tg.place.pi.pow(static_cast<std::uint64_t>(e));
        c.has_unit = true;
        break;
      }
      case TargetKind::MinOrd: {
        const long e = tg.ord + d;
        if (e < 1) continue;  // satisfied by any D-integral solution
        c.modulus = tg.place.pi.pow(static_cast<std::uint64_t>(e));
        c.base = Poly(constants_);
        break;
      }
      case TargetKind::Congruence: {
        const long k = tg.prec + d;
        if (k < 1) continue;
        c.modulus = tg.place.pi.pow(static_cast<std::uint64_t>(k));
        c.base = mod_power(tg.place, tg.value * Dq, k);
        break;
      }
    }
    congs.push_back(std::move(c));
  }

  // Enumerate the unit residues left free by ExactOrd targets; keep the
  // representative that is minimal in the counting order.
  std::vector<size_t> unit_slots;
  std::uint64_t combos = 1;
  for (size_t i = 0; i < congs.size(); ++i)
    if (congs[i].has_unit) unit_slots.push_back(i);
  for (size_t s : unit_slots) {
    combos *= residue_size(*congs[s].place) - 1;
    if (combos > 1024) break;
  }
  if (combos > 1024) combos = 1;  // fall back to unit residue 1 everywhere

  std::optional<Poly> best;
  for (std::uint64_t combo = 0; combo < combos; ++combo) {
    std::uint64_t w = combo;
    std::vector<Poly> residues, moduli;
    for (const auto& c : congs) {
      Poly r = c.base;
      if (c.has_unit) {
        const std::uint64_t units = residue_size(*c.place) - 1;
        const std::uint64_t pick = combos == 1 ? 0 : w % units;
        if (combos > 1) w /= units;
        // lift index pick+1 to a nonzero residue polynomial
        std::vector<FFElem> cs;
        std::uint64_t idx = pick + 1;
        while (idx > 0) {
          cs.push_back(constants_->from_index(idx % q()));
          idx /= q();
        }
        r = c.unit_step * Poly(constants_, std::move(cs));
      }
      residues.push_back(r % c.modulus);
      moduli.push_back(c.modulus);
    }
    Poly X = residues.empty() ? Poly(constants_) : poly_crt(residues, moduli);
    if (!best || poly_less(X, *best)) best = X;
  }

  Elem x = RatFunc(*best, D);
  for (const auto& tg : targets) {
    bool ok = true;
    switch (tg.kind) {
      case TargetKind::ExactOrd:
        ok = ord(tg.place, x) == std::optional<long>(tg.ord);
        break;
      case TargetKind::MinOrd:
        ok = ord_at_least(tg.place, x, tg.ord);
        break;
      case TargetKind::Congruence:
        ok = ord_at_least(tg.place, x - tg.value, tg.prec);
        break;
    }
    if (!ok) throw VerificationError("approximation result fails a target re-check");
  }
  return x;
}

std::pair<FqtField::Elem, FqtField::Elem> FqtField::split_at(const Place& v,
                                                             const Elem& x) const {
  if (!v.is_finite()) throw ArgumentError("split_at needs a finite place");
  if (x.is_zero()) return {zero(), zero()};
  const long a = *poly_ord(x.den(), v.pi);
  if (a == 0) return {zero(), x};
  const Poly pia = v.pi.pow(static_cast<std::uint64_t>(a));
  const Poly h = Poly::divmod(x.den(), pia).first;
  // Bezout: s*pia + r*h = 1
  Poly r0 = pia, r1 = h;
  Poly s0 = Poly::constant(constants_->one()), s1(constants_);
  Poly t0(constants_), t1 = Poly::constant(constants_->one());
  while (!r1.is_zero()) {
    auto [qt, r2] = Poly::divmod(r0, r1);
    Poly s2 = s0 - qt * s1;
    Poly t2 = t0 - qt * t1;
    r0 = std::move(r1);
    r1 = std::move(r2);
    s0 = std::move(s1);
    s1 = std::move(s2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (r0.degree() != 0) throw VerificationError("pi^a and cofactor not coprime");
  const FFElem c = r0.coeff(0).inv();
  const Poly s = s0.scaled(c), r = t0.scaled(c);  // s*pia + r*h = 1
  Elem sing = RatFunc(x.num() * r, pia);
  Elem rest = RatFunc(x.num() * s, h);
  if (!(sing + rest == x)) throw VerificationError("partial fraction split failed");
  return {sing, rest};
}

std::vector<FqtField::Place> FqtField::support(const Elem& x) const {
  std::vector<Place> out;
  if (x.is_zero()) return out;
  auto add_factors = [&](const Poly& f) {
    if (f.degree() < 1) return;
    for (auto& [pi, mult] : poly_factor(f).second) {
      Place v = Place::finite(pi);
      if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(std::move(v));
    }
  };
  add_factors(x.num());
  add_factors(x.den());
  std::sort(out.begin(), out.end(),
            [](const Place& a, const Place& b) { return poly_less(a.pi, b.pi); });
  return out;
}

FqtField::Place FqtField::next_finite_place(const std::vector<Place>& avoid) const {
  for (unsigned d = 1; d <= 8; ++d) {
    for (const auto& pi : monic_irreducibles(constants_, d)) {
      Place v = Place::finite(pi);
      if (std::find(avoid.begin(), avoid.end(), v) == avoid.end()) return v;
    }
  }
  throw SearchBoundError("no helper place of degree <= 8 available");
}

std::vector<FqtField::Elem> FqtField::elements_of_height_at_most(long B) const {
  std::vector<Elem> out;
  const std::uint64_t qq = q();
  auto polys_up_to = [&](long deg) {
    std::vector<Poly> ps;
    std::uint64_t count = 1;
    for (long i = 0; i <= deg; ++i) count *= qq;
    for (std::uint64_t idx = 0; idx < count; ++idx) {
      std::vector<FFElem> cs;
      std::uint64_t w = idx;
      for (long i = 0; i <= deg; ++i) {
        cs.push_back(constants_->from_index(w % qq));
        w /= qq;
      }
      ps.emplace_back(constants_, std::move(cs));
    }
    return ps;
  };
  auto monics_of_degree = [&](long deg) {
    std::vector<Poly> ps;
    std::uint64_t count = 1;
    for (long i = 0; i < deg; ++i) count *= qq;
    for (std::uint64_t idx = 0; idx < count; ++idx) {
      std::vector<FFElem> cs;
      std::uint64_t w = idx;
      for (long i = 0; i < deg; ++i) {
        cs.push_back(constants_->from_index(w % qq));
        w /= qq;
      }
      cs.push_back(constants_->one());
      ps.emplace_back(constants_, std::move(cs));
    }
    return ps;
  };
  for (long h = 0; h <= B; ++h) {
    for (long dd = 0; dd <= h; ++dd) {
      for (const auto& g : monics_of_degree(dd)) {
        for (const auto& f : polys_up_to(h)) {
          const long hh = std::max({f.degree(), g.degree(), 0});
          if (hh != h) continue;
          if (!poly_gcd(f, g).is_one()) continue;
          out.emplace_back(f, g);
        }
      }
    }
  }
  return out;
}

FqtField::Elem FqtField::invert_t(const Elem& x) const {
  const Elem ti = one() / t();
  auto eval_at = [&](const Poly& f) {
    Elem acc = zero();
    for (int i = f.degree(); i >= 0; --i)
      acc = acc * ti + RatFunc(Poly::constant(f.coeff(i)));
    return acc;
  };
  return eval_at(x.num()) / eval_at(x.den());
}

std::string FqtField::place_to_string(const Place& v) const {
  if (!v.is_finite()) return "infinite";
  return "finite:" + v.pi.to_string("t");
}

FqtField::Place FqtField::parse_place(const std::string& text) const {
  if (text == "infinite") return Place::infinite();
  const std::string prefix = "finite:";
  if (text.rfind(prefix, 0) == 0) {
    Elem e = parse(text.substr(prefix.size()));
    if (!e.is_polynomial()) throw ArgumentError("place polynomial must not have a denominator");
    return Place::finite(e.num());
  }
  throw ArgumentError("unknown place literal '" + text + "'");
}

// ===========================================================================
// RationalField
// ===========================================================================

RationalField::Place RationalField::Place::finite(BigInt ell) {
  if (ell < 2 || !is_prime(ell)) throw ArgumentError("finite place requires a prime");
  Place v;
  v.kind = Kind::Finite;
  v.ell = std::move(ell);
  return v;
}

std::optional<long> RationalField::ord(const Place& v, const Elem& x) const {
  if (!v.is_finite()) throw ArgumentError("the real place carries no discrete valuation");
  return rational_ord(x, v.ell);
}

bool RationalField::ord_at_least(const Place& v, const Elem& x, long k) const {
  const auto e = ord(v, x);
  return !e || *e >= k;
}

RationalField::Elem RationalField::uniformizer(const Place& v) const {
  if (!v.is_finite()) throw ArgumentError("the real place has no uniformizer");
  return BigRational(v.ell);
}

std::uint64_t RationalField::residue_size(const Place& v) const {
  if (!v.is_finite()) throw ArgumentError("the real place has no residue field");
  return v.ell.get_ui();
}

FFPtr RationalField::residue_field(const Place& v) const {
  if (!v.is_finite()) throw ArgumentError("the real place has no residue field");
  if (!v.ell.fits_uint_p()) throw SearchBoundError("residue prime beyond desk scale");
  return FiniteField::prime_field(static_cast<std::uint32_t>(v.ell.get_ui()));
}

FFElem RationalField::residue(const Place& v, const Elem& x) const {
  const BigInt r = mod_power(v, x, 1);
  return residue_field(v)->from_int(r.get_si());
}

BigInt RationalField::mod_power(const Place& v, const Elem& x, long k) const {
  if (!v.is_finite()) throw ArgumentError("mod_power needs a finite place");
  if (k < 1) throw ArgumentError("mod_power needs k >= 1");
  if (!ord_at_least(v, x, 0)) throw ArgumentError("mod_power of a non-integral element");
  BigInt M;
  mpz_pow_ui(M.get_mpz_t(), v.ell.get_mpz_t(), static_cast<unsigned long>(k));
  BigInt dinv;
  if (mpz_invert(dinv.get_mpz_t(), x.get_den().get_mpz_t(), M.get_mpz_t()) == 0)
    throw VerificationError("denominator not invertible mod ell^k");
  BigInt r = x.get_num() * dinv;
  mpz_mod(r.get_mpz_t(), r.get_mpz_t(), M.get_mpz_t());
  return r;
}

std::vector<BigInt> RationalField::residue_system(const Place& v, long k) const {
  if (!v.is_finite() || k < 1) throw ArgumentError("residue_system needs a finite place, k >= 1");
  BigInt M;
  mpz_pow_ui(M.get_mpz_t(), v.ell.get_mpz_t(), static_cast<unsigned long>(k));
  if (M > 50'000'000) throw SearchBoundError("residue system too large");
  std::vector<BigInt> out;
  out.reserve(M.get_ui());
  for (BigInt r = 0; r < M; ++r) out.push_back(r);
  return out;
}

bool RationalField::is_local_square(const Place& v, const Elem& x) const {
  if (sgn(x) == 0) throw ArgumentError("local square test on zero");
  if (!v.is_finite()) return sgn(x) > 0;
  const long e = *ord(v, x);
  if (!parity_even(e)) return false;
  // prime-to-ell parts of num and den
  BigInt un = x.get_num(), ud = x.get_den();
  mpz_remove(un.get_mpz_t(), un.get_mpz_t(), v.ell.get_mpz_t());
  mpz_remove(ud.get_mpz_t(), ud.get_mpz_t(), v.ell.get_mpz_t());
  if (v.ell == 2) {
    // unit square in Q_2 iff the unit is 1 mod 8
    BigInt n8, d8;
    mpz_mod_ui(n8.get_mpz_t(), un.get_mpz_t(), 8);
    mpz_mod_ui(d8.get_mpz_t(), ud.get_mpz_t(), 8);
    return n8 == d8;
  }
  const BigInt u = un * ud;
  return mpz_legendre(u.get_mpz_t(), v.ell.get_mpz_t()) == 1;
}

RationalField::Elem RationalField::approximate(const std::vector<Target>& targets) const {
  if (targets.empty()) throw ArgumentError("approximation needs at least one target");
  std::vector<Place> places;
  for (const auto& tg : targets) {
    if (!tg.place.is_finite())
      throw ArgumentError("approximation at the real place is not supported");
    places.push_back(tg.place);
  }
  require_distinct_places(places);

  std::vector<long> depth(targets.size(), 0);
  BigInt D = 1;
  auto ellpow = [](const BigInt& ell, long e) {
    BigInt r;
    mpz_pow_ui(r.get_mpz_t(), ell.get_mpz_t(), static_cast<unsigned long>(e));
    return r;
  };
  for (size_t i = 0; i < targets.size(); ++i) {
    const auto& tg = targets[i];
    long need = 0;
    if (tg.kind == TargetKind::ExactOrd && tg.ord < 0) need = -tg.ord;
    if (tg.kind == TargetKind::Congruence && sgn(tg.value) != 0) {
      const long vv = *ord(tg.place, tg.value);
      if (vv < 0) need = std::max(need, -vv);
    }
    depth[i] = need;
    D *= ellpow(tg.place.ell, need);
  }

  struct Cong {
    BigInt modulus;
    BigInt base;
    BigInt unit_step;
    bool has_unit = false;
    const Place* place;
  };
  std::vector<Cong> congs;
  for (size_t i = 0; i < targets.size(); ++i) {
    const auto& tg = targets[i];
    const long d = depth[i];
    Cong c;
    c.place = &tg.place;
    switch (tg.kind) {
      case TargetKind::ExactOrd: {
        const long e = tg.ord + d;
        c.modulus = ellpow(tg.place.ell, e + 1);
        c.unit_step = ellpow(tg.place.ell, e);
        c.has_unit = true;
        break;
      }
      case TargetKind::MinOrd: {
        const long e = tg.ord + d;
        if (e < 1) continue;
        c.modulus = ellpow(tg.place.ell, e);
        c.base = 0;
        break;
      }
      case TargetKind::Congruence: {
        const long k = tg.prec + d;
        if (k < 1) continue;
        c.modulus = ellpow(tg.place.ell, k);
        c.base = mod_power(tg.place, tg.value * BigRational(D), k);
        break;
      }
    }
    congs.push_back(std::move(c));
  }

  std::uint64_t combos = 1;
  for (const auto& c : congs) {
    if (!c.has_unit) continue;
    combos *= c.place->ell.get_ui() - 1;
    if (combos > 1024) break;
  }
  if (combos > 1024) combos = 1;

  auto crt_pair = [](const BigInt& r1, const BigInt& m1, const BigInt& r2, const BigInt& m2) {
    BigInt g, s, t;
    mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), m1.get_mpz_t(), m2.get_mpz_t());
    if (g != 1) throw ArgumentError("CRT moduli are not coprime");
    BigInt M = m1 * m2;
    BigInt x = r1 * t * m2 + r2 * s * m1;
    mpz_mod(x.get_mpz_t(), x.get_mpz_t(), M.get_mpz_t());
    return std::pair<BigInt, BigInt>(x, M);
  };

  std::optional<BigInt> best;
  for (std::uint64_t combo = 0; combo < combos; ++combo) {
    std::uint64_t w = combo;
    BigInt X = 0, M = 1;
    for (const auto& c : congs) {
      BigInt r = c.base;
      if (c.has_unit) {
        const std::uint64_t units = c.place->ell.get_ui() - 1;
        const std::uint64_t pick = combos == 1 ? 0 : w % units;
        if (combos > 1) w /= units;
        r = c.unit_step * BigInt(static_cast<unsigned long>(pick + 1));
      }
      BigInt rr;
      mpz_mod(rr.get_mpz_t(), r.get_mpz_t(), c.modulus.get_mpz_t());
      std::tie(X, M) = crt_pair(X, M, rr, c.modulus);
    }
    // minimal-absolute-value representative, ties resolved positive
    BigInt cand = X;
    if (2 * cand > M) cand -= M;
    if (!best || abs(cand) < abs(*best) || (abs(cand) == abs(*best) && cand > *best))
      best = cand;
  }

  Elem x = make_rational(*best, D);
  for (const auto& tg : targets) {
    bool ok = true;
    switch (tg.kind) {
      case TargetKind::ExactOrd:
        ok = ord(tg.place, x) == std::optional<long>(tg.ord);
        break;
      case TargetKind::MinOrd:
        ok = ord_at_least(tg.place, x, tg.ord);
        break;
      case TargetKind::Congruence:
        ok = ord_at_least(tg.place, x - tg.value, tg.prec);
        break;
    }
    if (!ok) throw VerificationError("approximation result fails a target re-check");
  }
  return x;
}

std::pair<RationalField::Elem, RationalField::Elem> RationalField::split_at(
    const Place& v, const Elem& x) const {
  if (!v.is_finite()) throw ArgumentError("split_at needs a finite place");
  if (sgn(x) == 0) return {zero(), zero()};
  BigInt h = x.get_den();
  const long a = static_cast<long>(
      mpz_remove(h.get_mpz_t(), h.get_mpz_t(), v.ell.get_mpz_t()));
  if (a == 0) return {zero(), x};
  BigInt la;
  mpz_pow_ui(la.get_mpz_t(), v.ell.get_mpz_t(), static_cast<unsigned long>(a));
  BigInt g, s, r;
  mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), r.get_mpz_t(), la.get_mpz_t(), h.get_mpz_t());
  if (g != 1) throw VerificationError("ell^a and cofactor not coprime");
  // s*la + r*h = 1  =>  n/(la*h) = n*r/la + n*s/h
  const BigInt n = x.get_num();
  Elem sing = make_rational(n * r, la);
  Elem rest = make_rational(n * s, h);
  if (!(sing + rest == x)) throw VerificationError("partial fraction split failed");
  return {sing, rest};
}

std::vector<RationalField::Place> RationalField::support(const Elem& x) const {
  std::vector<Place> out;
  if (sgn(x) == 0) return out;
  std::vector<BigInt> primes;
  for (auto& [p, e] : factor_integer(x.get_num())) primes.push_back(p);
  for (auto& [p, e] : factor_integer(x.get_den())) primes.push_back(p);
  std::sort(primes.begin(), primes.end());
  primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
  out.reserve(primes.size());
  for (auto& p : primes) out.push_back(Place::finite(p));
  return out;
}

RationalField::Place RationalField::next_finite_place(const std::vector<Place>& avoid) const {
  for (BigInt p = 3;; mpz_nextprime(p.get_mpz_t(), p.get_mpz_t())) {
    Place v = Place::finite(p);
    if (std::find(avoid.begin(), avoid.end(), v) == avoid.end()) return v;
  }
}

std::vector<RationalField::Elem> RationalField::elements_of_height_at_most(long B) const {
  std::vector<Elem> out;
  for (long h = 1; h <= B; ++h) {
    for (long d = 1; d <= h; ++d) {
      for (long m = 0; m <= h; ++m) {
        if (std::max(m, d) != h) continue;
        BigInt g;
        mpz_gcd(g.get_mpz_t(), BigInt(m).get_mpz_t(), BigInt(d).get_mpz_t());
        if (g != 1) continue;
        out.push_back(make_rational(m, d));
        if (m != 0) out.push_back(make_rational(-m, d));
      }
    }
  }
  return out;
}

std::string RationalField::place_to_string(const Place& v) const {
  if (!v.is_finite()) return "real";
  return "prime:" + v.ell.get_str();
}

RationalField::Place RationalField::parse_place(const std::string& text) const {
  if (text == "real") return Place::real();
  const std::string prefix = "prime:";
  if (text.rfind(prefix, 0) == 0) return Place::finite(BigInt(text.substr(prefix.size())));
  throw ArgumentError("unknown place literal '" + text + "'");
}

}  // namespace diodef
