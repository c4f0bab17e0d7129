#pragma once

#include <algorithm>
#include <vector>

#include "diodef/places.hpp"

namespace diodef {

// ---------------------------------------------------------------------------
// Hilbert symbols, ramification sets of quaternion algebras, the reciprocity
// check, and construction of an algebra ramified at exactly two prescribed
// finite places.
// ---------------------------------------------------------------------------

struct SearchLimits {
  unsigned max_algebra_degree = 8;         // F_q(t): degree cap for the first slot
  std::uint64_t max_algebra_candidates = 200000;  // Q: candidate cap for the first slot
  std::uint64_t coset_cap = 20000;         // refuse definitions with more cosets
};

template <class F>
struct RamificationData {
  typename F::Elem a, b;
  // Places with local invariant 1/2 (Hilbert symbol -1); all others are 0.
  std::vector<typename F::Place> ram;
};

template <class F>
struct ReciprocityEvidence {
  bool ok = false;
  std::vector<std::pair<typename F::Place, int>> symbols;  // at candidate bad places
};

namespace detail {

// Tame symbol at a place with odd residue characteristic:
//   (a,b)_v = chi((-1)^(alpha beta) * u^beta * w^alpha)
// with a = pi^alpha u, b = pi^beta w and chi the residue quadratic character.
template <class F>
int tame_symbol(const F& K, const typename F::Place& v, const typename F::Elem& a,
                const typename F::Elem& b) {
  const long alpha = *K.ord(v, a);
  const long beta = *K.ord(v, b);
  const auto pi = K.uniformizer(v);
  const auto ubar = K.residue(v, a * elem_pow(K, pi, -alpha));
  const auto wbar = K.residue(v, b * elem_pow(K, pi, -beta));
  const int chi_m1 = quadratic_character(-ubar.field()->one());
  int sign = 1;
  if ((alpha & 1) && (beta & 1)) sign *= chi_m1;
  if (beta & 1) sign *= quadratic_character(ubar);
  if (alpha & 1) sign *= quadratic_character(wbar);
  return sign;
}

inline bool fqt_tame(const FqtField& K, const FqtField::Place&) {
  if (!K.odd_characteristic())
    throw ArgumentError("Hilbert symbols over F_q(t) require odd q");
  return true;
}

inline bool q_tame(const RationalField&, const RationalField::Place& v) {
  return v.is_finite() && v.ell != 2;
}

inline int fqt_special(const FqtField&, const FqtField::Place&, const RatFunc&,
                       const RatFunc&) {
  throw VerificationError("no special places over F_q(t) with odd q");
}

// Q at 2 and at the real place.
inline int q_special(const RationalField& K, const RationalField::Place& v,
                     const BigRational& a, const BigRational& b) {
  if (!v.is_finite()) return (sgn(a) < 0 && sgn(b) < 0) ? -1 : 1;
  // dyadic formula: (a,b)_2 = (-1)^(eps(u)eps(w) + alpha*omega(w) + beta*omega(u))
  auto odd_part_mod8 = [&](const BigRational& x, long& e) {
    e = *K.ord(v, x);
    BigInt un = x.get_num(), ud = x.get_den();
    mpz_remove(un.get_mpz_t(), un.get_mpz_t(), v.ell.get_mpz_t());
    mpz_remove(ud.get_mpz_t(), ud.get_mpz_t(), v.ell.get_mpz_t());
    BigInt m;
    BigInt prod = un * ud;  // = u * (odd square), same class mod squares
    mpz_mod_ui(m.get_mpz_t(), prod.get_mpz_t(), 8);
    return m.get_ui();
  };
  long alpha = 0, beta = 0;
  const unsigned long u8 = odd_part_mod8(a, alpha);
  const unsigned long w8 = odd_part_mod8(b, beta);
  const int eps_u = (u8 % 4 == 3) ? 1 : 0;
  const int eps_w = (w8 % 4 == 3) ? 1 : 0;
  const int omg_u = (u8 == 3 || u8 == 5) ? 1 : 0;
  const int omg_w = (w8 == 3 || w8 == 5) ? 1 : 0;
  const long expo = eps_u * eps_w + (alpha & 1) * omg_w + (beta & 1) * omg_u;
  return (expo & 1) ? -1 : 1;
}

inline bool is_tame(const FqtField& K, const FqtField::Place& v) { return fqt_tame(K, v); }
inline bool is_tame(const RationalField& K, const RationalField::Place& v) {
  return q_tame(K, v);
}
inline int special_symbol(const FqtField& K, const FqtField::Place& v, const RatFunc& a,
                          const RatFunc& b) {
  return fqt_special(K, v, a, b);
}
inline int special_symbol(const RationalField& K, const RationalField::Place& v,
                          const BigRational& a, const BigRational& b) {
  return q_special(K, v, a, b);
}

}  // namespace detail

// (a, b)_v = +1 iff z^2 = a x^2 + b y^2 has a nontrivial solution over the
// completion at v, i.e. iff H(a, b) splits at v.
template <class F>
int hilbert_symbol(const F& K, const typename F::Place& v, const typename F::Elem& a,
                   const typename F::Elem& b) {
  if (is_zero(a) || is_zero(b)) throw ArgumentError("Hilbert symbol of zero");
  if (detail::is_tame(K, v)) return detail::tame_symbol(K, v, a, b);
  return detail::special_symbol(K, v, a, b);
}

// Candidate places where (a,b)_v could be -1: divisors of a and b plus the
// mandatory bad places of the field. Everywhere else both arguments are units
// at an odd place, so the tame symbol is +1.
template <class F>
std::vector<typename F::Place> candidate_bad_places(const F& K, const typename F::Elem& a,
                                                    const typename F::Elem& b) {
  std::vector<typename F::Place> places = K.support(a);
  for (const auto& v : K.support(b))
    if (std::find(places.begin(), places.end(), v) == places.end()) places.push_back(v);
  for (const auto& v : K.mandatory_bad_places())
    if (std::find(places.begin(), places.end(), v) == places.end()) places.push_back(v);
  return places;
}

template <class F>
RamificationData<F> ram_set(const F& K, const typename F::Elem& a,
                            const typename F::Elem& b) {
  RamificationData<F> data;
  data.a = a;
  data.b = b;
  for (const auto& v : candidate_bad_places(K, a, b))
    if (hilbert_symbol(K, v, a, b) == -1) data.ram.push_back(v);
  if (data.ram.size() % 2 != 0)
    throw VerificationError("ramification set of odd cardinality; symbol computation broken");
  return data;
}

template <class F>
ReciprocityEvidence<F> reciprocity_check(const F& K, const typename F::Elem& a,
                                         const typename F::Elem& b) {
  ReciprocityEvidence<F> ev;
  int product = 1;
  for (const auto& v : candidate_bad_places(K, a, b)) {
    const int s = hilbert_symbol(K, v, a, b);
    ev.symbols.emplace_back(v, s);
    product *= s;
  }
  ev.ok = product == 1;
  return ev;
}

namespace detail {

// Candidate enumeration for the unit slot of find_ramified_algebra. The
// second slot is fixed to pi_1 * pi_2, so any unit lift that is a nonsquare
// at both places ramifies there; choosing the candidate irreducible (prime)
// pins the only other possible finite bad place, and reciprocity then forces
// it to split once the place at infinity (resp. 2 and the real place) does.
// `accept` is called in deterministic order and stops the scan on true.
template <class Fn>
void for_each_unit_candidate(const FqtField& K, const FqtField::Place& v1,
                             const FqtField::Place& v2, const SearchLimits& limits,
                             Fn accept) {
  for (unsigned d = 1; d <= limits.max_algebra_degree; ++d) {
    for (const auto& pi : monic_irreducibles(K.constants(), d)) {
      const RatFunc a(pi);
      if (quadratic_character(K.residue(v1, a)) != -1) continue;
      if (quadratic_character(K.residue(v2, a)) != -1) continue;
      if (accept(a)) return;
    }
  }
}

template <class Fn>
void for_each_unit_candidate(const RationalField&, const RationalField::Place& v1,
                             const RationalField::Place& v2, const SearchLimits& limits,
                             Fn accept) {
  for (std::uint64_t n = 1; n < limits.max_algebra_candidates; ++n) {
    const BigInt u = 8 * BigInt(static_cast<unsigned long>(n)) + 1;
    if (mpz_legendre(u.get_mpz_t(), v1.ell.get_mpz_t()) != -1) continue;
    if (mpz_legendre(u.get_mpz_t(), v2.ell.get_mpz_t()) != -1) continue;
    if (!is_prime(u)) continue;
    if (accept(BigRational(u))) return;
  }
}

}  // namespace detail

// Deterministic bounded search for (a, b) with ram_set(a, b) = {v1, v2}
// exactly; the result is post-verified, never assumed.
template <class F>
RamificationData<F> find_ramified_algebra(const F& K, const typename F::Place& v1,
                                          const typename F::Place& v2,
                                          const SearchLimits& limits = {}) {
  if (v1 == v2) throw ArgumentError("the two ramified places must be distinct");
  if (!v1.is_finite() || !v2.is_finite())
    throw ArgumentError("the two ramified places must be finite");
  if (!detail::is_tame(K, v1) || !detail::is_tame(K, v2))
    throw ArgumentError("ramified-place construction needs odd residue characteristic");
  // note: spelled type, not auto; gmp expression templates must not escape
  const typename F::Elem b = K.uniformizer(v1) * K.uniformizer(v2);
  std::optional<RamificationData<F>> found;
  detail::for_each_unit_candidate(K, v1, v2, limits, [&](const typename F::Elem& a) {
    RamificationData<F> data = ram_set(K, a, b);
    const bool exact = data.ram.size() == 2 &&
                       ((data.ram[0] == v1 && data.ram[1] == v2) ||
                        (data.ram[0] == v2 && data.ram[1] == v1));
    if (exact) found = std::move(data);
    return found.has_value();
  });
  if (!found)
    throw SearchBoundError("no quaternion algebra with the prescribed ramification in budget");
  return *found;
}

}  // namespace diodef
