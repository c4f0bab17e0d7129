#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "diodef/exactalg.hpp"

namespace diodef {

// ---------------------------------------------------------------------------
// Global-field models. Two are provided:
//
//   FqtField       k = F_q(t); places are monic irreducibles plus the degree
//                  place at infinity (ord_inf(f/g) = deg g - deg f).
//   RationalField  k = Q; places are the rational primes plus the real place.
//
// Both expose the same member-function surface so the symbol, quadratic-form
// and definition pipelines can be written once against either model.
// ---------------------------------------------------------------------------

// Approximation targets. Exactly one target per place:
//   ExactOrd    ord_v(x) = ord
//   MinOrd      ord_v(x) >= ord   (ord >= 1)
//   Congruence  ord_v(x - value) >= prec  (prec >= 1)
enum class TargetKind { ExactOrd, MinOrd, Congruence };

template <class PlaceT, class ElemT>
struct ApproxTarget {
  PlaceT place;
  TargetKind kind = TargetKind::ExactOrd;
  long ord = 0;
  ElemT value{};
  long prec = 1;

  static ApproxTarget exact_ord(PlaceT v, long e) { return {std::move(v), TargetKind::ExactOrd, e, {}, 1}; }
  static ApproxTarget min_ord(PlaceT v, long e) { return {std::move(v), TargetKind::MinOrd, e, {}, 1}; }
  static ApproxTarget congruent(PlaceT v, ElemT c, long k = 1) {
    return {std::move(v), TargetKind::Congruence, 0, std::move(c), k};
  }
};

// ---------------------------------------------------------------------------
// F_q(t)
// ---------------------------------------------------------------------------

class FqtField {
 public:
  using Elem = RatFunc;

  struct Place {
    enum class Kind { Finite, Infinite };
    Kind kind = Kind::Infinite;
    Poly pi;  // monic irreducible; valid iff kind == Finite

    static Place finite(Poly pi);
    static Place infinite() { return Place{}; }
    bool is_finite() const { return kind == Kind::Finite; }
    // Residue field degree over the constants.
    unsigned deg() const { return kind == Kind::Finite ? pi.degree() : 1; }
    friend bool operator==(const Place& a, const Place& b) {
      return a.kind == b.kind && (a.kind != Kind::Finite || a.pi == b.pi);
    }
  };

  using Target = ApproxTarget<Place, Elem>;

  explicit FqtField(FFPtr constants);
  static FqtField with_order(std::uint64_t q) { return FqtField(FiniteField::with_order(q)); }

  const FFPtr& constants() const { return constants_; }
  std::uint64_t q() const { return constants_->order(); }
  std::uint32_t characteristic() const { return constants_->characteristic(); }
  bool odd_characteristic() const { return characteristic() != 2; }

  Elem zero() const { return RatFunc::zero(constants_); }
  Elem one() const { return RatFunc::one(constants_); }
  Elem from_int(std::int64_t v) const { return RatFunc::from_int(constants_, v); }
  Elem t() const { return RatFunc(Poly::variable(constants_)); }

  // --- places and valuations ---

  std::optional<long> ord(const Place& v, const Elem& x) const;
  bool ord_at_least(const Place& v, const Elem& x, long k) const;
  Elem uniformizer(const Place& v) const;
  std::uint64_t residue_size(const Place& v) const;  // |k_v| = q^deg
  FFPtr residue_field(const Place& v) const;
  // Image of x in k_v; requires ord_v(x) >= 0.
  FFElem residue(const Place& v, const Elem& x) const;
  // x mod pi^k as a polynomial of degree < k*deg(pi); requires ord_v(x) >= 0
  // and v finite.
  Poly mod_power(const Place& v, const Elem& x, long k) const;
  // All canonical representatives modulo pi^k (counting order).
  std::vector<Poly> residue_system(const Place& v, long k) const;

  bool is_local_square(const Place& v, const Elem& x) const;

  // Weak approximation: deterministic element meeting all targets; the
  // representative is the minimal one in the (degree, counting) order among
  // the unit-residue choices left free by ExactOrd targets.
  Elem approximate(const std::vector<Target>& targets) const;

  // Partial-fraction split at a finite place: x = sing + rest where sing has
  // denominator a power of pi only and ord_v(rest) >= 0.
  std::pair<Elem, Elem> split_at(const Place& v, const Elem& x) const;

  // Finite places dividing num or den, in (degree, counting) order.
  std::vector<Place> support(const Elem& x) const;
  // Places at which a Hilbert symbol can be nontrivial even for units.
  std::vector<Place> mandatory_bad_places() const { return {Place::infinite()}; }

  // Finite places in (degree, counting) order, skipping `avoid`.
  Place next_finite_place(const std::vector<Place>& avoid) const;

  long height(const Elem& x) const { return x.height(); }
  // All canonical elements of height <= B, height strata in order; within a
  // stratum ordered by (den, num) counting order.
  std::vector<Elem> elements_of_height_at_most(long B) const;
  std::optional<Elem> sqrt(const Elem& x) const { return x.sqrt_exact(); }

  // The field automorphism t -> 1/t. It swaps the place (t) with the place at
  // infinity, so pipelines that need a finite target can translate.
  Elem invert_t(const Elem& x) const;

  std::string to_string(const Elem& x) const { return x.to_string("t"); }
  Elem parse(const std::string& text) const { return parse_ratfunc(text, constants_, "t"); }
  std::string place_to_string(const Place& v) const;
  Place parse_place(const std::string& text) const;

 private:
  FFPtr constants_;
};

// ---------------------------------------------------------------------------
// Q
// ---------------------------------------------------------------------------

class RationalField {
 public:
  using Elem = BigRational;

  struct Place {
    enum class Kind { Finite, Real };
    Kind kind = Kind::Real;
    BigInt ell;  // prime; valid iff kind == Finite

    static Place finite(BigInt ell);
    static Place real() { return Place{}; }
    bool is_finite() const { return kind == Kind::Finite; }
    friend bool operator==(const Place& a, const Place& b) {
      return a.kind == b.kind && (a.kind != Kind::Finite || a.ell == b.ell);
    }
  };

  using Target = ApproxTarget<Place, Elem>;

  bool odd_characteristic() const { return true; }

  Elem zero() const { return BigRational(0); }
  Elem one() const { return BigRational(1); }
  Elem from_int(std::int64_t v) const { return BigRational(static_cast<long>(v)); }

  std::optional<long> ord(const Place& v, const Elem& x) const;
  bool ord_at_least(const Place& v, const Elem& x, long k) const;
  Elem uniformizer(const Place& v) const;
  std::uint64_t residue_size(const Place& v) const;
  FFPtr residue_field(const Place& v) const;
  FFElem residue(const Place& v, const Elem& x) const;
  BigInt mod_power(const Place& v, const Elem& x, long k) const;
  std::vector<BigInt> residue_system(const Place& v, long k) const;

  bool is_local_square(const Place& v, const Elem& x) const;

  Elem approximate(const std::vector<Target>& targets) const;
  std::pair<Elem, Elem> split_at(const Place& v, const Elem& x) const;

  std::vector<Place> support(const Elem& x) const;
  std::vector<Place> mandatory_bad_places() const {
    return {Place::finite(2), Place::real()};
  }

  // Odd primes in increasing order, skipping `avoid`. The prime 2 is never a
  // pipeline helper: dyadic square classes break the tame arguments.
  Place next_finite_place(const std::vector<Place>& avoid) const;

  BigInt height(const Elem& x) const { return rational_height(x); }
  std::vector<Elem> elements_of_height_at_most(long B) const;
  std::optional<Elem> sqrt(const Elem& x) const { return rational_sqrt(x); }

  std::string to_string(const Elem& x) const { return rational_to_string(x); }
  Elem parse(const std::string& text) const { return parse_bigrational(text); }
  std::string place_to_string(const Place& v) const;
  Place parse_place(const std::string& text) const;
};

template <class F>
typename F::Elem elem_pow(const F& K, const typename F::Elem& x, long e) {
  if (e < 0) return K.one() / elem_pow(K, x, -e);
  typename F::Elem acc = K.one(), base = x;
  std::uint64_t k = static_cast<std::uint64_t>(e);
  while (k > 0) {
    if (k & 1) acc = acc * base;
    base = base * base;
    k >>= 1;
  }
  return acc;
}

}  // namespace diodef
