#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "diodef/errors.hpp"

namespace diodef {

// ---------------------------------------------------------------------------
// Finite fields F_{p^m} = F_p[u]/(modulus), modulus monic irreducible.
// Fields are immutable and shared through FFPtr; elements carry their field.
// ---------------------------------------------------------------------------

class FiniteField;
using FFPtr = std::shared_ptr<const FiniteField>;

class FFElem {
 public:
  FFElem() = default;  // detached element; arithmetic on it throws

  const FFPtr& field() const { return field_; }
  // Coefficients over F_p, lowest degree first, no trailing zeros.
  const std::vector<std::uint32_t>& rep() const { return rep_; }

  bool is_zero() const { return rep_.empty(); }
  bool is_one() const { return rep_.size() == 1 && rep_[0] == 1; }
  // Counting index sum(rep[i] * p^i); total order used for enumeration.
  std::uint64_t index() const;

  FFElem operator-() const;
  friend FFElem operator+(const FFElem& x, const FFElem& y);
  friend FFElem operator-(const FFElem& x, const FFElem& y);
  friend FFElem operator*(const FFElem& x, const FFElem& y);
  friend FFElem operator/(const FFElem& x, const FFElem& y);
  FFElem inv() const;
  FFElem pow(std::uint64_t e) const;

  friend bool operator==(const FFElem& x, const FFElem& y);
  friend bool operator!=(const FFElem& x, const FFElem& y) { return !(x == y); }

  std::string to_string(const std::string& var = "u") const;

 private:
  friend class FiniteField;
  FFElem(FFPtr field, std::vector<std::uint32_t> rep);

  FFPtr field_;
  std::vector<std::uint32_t> rep_;
};

class FiniteField : public std::enable_shared_from_this<FiniteField> {
 public:
  // F_p for prime p.
  static FFPtr prime_field(std::uint32_t p);
  // F_{p^m} with the first monic irreducible of degree m in counting order.
  // The choice is deterministic and recorded in serialized artifacts.
  static FFPtr with_degree(std::uint32_t p, unsigned m);
  // Explicit modulus, validated (monic, degree >= 1, irreducible over F_p).
  static FFPtr with_modulus(std::uint32_t p, std::vector<std::uint32_t> modulus);
  // Convenience: q = p^m given as one number.
  static FFPtr with_order(std::uint64_t q);

  std::uint32_t characteristic() const { return p_; }
  unsigned degree() const { return m_; }
  std::uint64_t order() const { return order_; }
  const std::vector<std::uint32_t>& modulus() const { return modulus_; }

  FFElem zero() const;
  FFElem one() const;
  FFElem from_int(std::int64_t v) const;
  // Coefficients lowest first; reduced mod p and mod the modulus.
  FFElem element(std::vector<std::uint32_t> coeffs) const;
  FFElem from_index(std::uint64_t idx) const;
  std::vector<FFElem> all_elements() const;
  FFElem generator() const;  // the class of u (for m = 1 this is 0 + (u))

  bool same_as(const FiniteField& other) const {
    return p_ == other.p_ && modulus_ == other.modulus_;
  }

 private:
  FiniteField(std::uint32_t p, std::vector<std::uint32_t> modulus);

  std::uint32_t p_ = 0;
  unsigned m_ = 0;
  std::uint64_t order_ = 0;
  std::vector<std::uint32_t> modulus_;
};

// chi(u) in {+1, -1, 0}: +1 for nonzero squares, -1 for nonsquares, 0 at 0.
// Computed as u^((q-1)/2). Throws on characteristic 2.
int quadratic_character(const FFElem& u);

// First element (counting order) that is a nonsquare in F*.
FFElem find_nonsquare(const FFPtr& field);

// First a (counting order) with chi(a^2 - 1) = -1; exists for every odd q.
FFElem find_nonsquare_shift(const FFPtr& field);

// x -> x^(1/p), the inverse of Frobenius (bijective on finite fields).
FFElem inverse_frobenius(const FFElem& x);

// Exact square root in the field if one exists.
std::optional<FFElem> ff_sqrt(const FFElem& x);

// ---------------------------------------------------------------------------
// Polynomials over a finite field, coefficients lowest degree first,
// canonical form: no trailing zero coefficients.
// ---------------------------------------------------------------------------

class Poly {
 public:
  Poly() = default;
  explicit Poly(FFPtr field);                    // zero polynomial
  Poly(FFPtr field, std::vector<FFElem> coeffs);  // trimmed

  static Poly constant(const FFElem& c);
  static Poly variable(FFPtr field);  // the monomial x
  static Poly from_int_coeffs(FFPtr field, std::vector<std::int64_t> coeffs);

  const FFPtr& field() const { return field_; }
  const std::vector<FFElem>& coeffs() const { return coeffs_; }
  // Degree; -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  bool is_one() const;
  bool is_monic() const;
  FFElem leading_coeff() const;
  FFElem coeff(unsigned i) const;

  Poly operator-() const;
  friend Poly operator+(const Poly& f, const Poly& g);
  friend Poly operator-(const Poly& f, const Poly& g);
  friend Poly operator*(const Poly& f, const Poly& g);
  Poly scaled(const FFElem& c) const;
  Poly monic() const;  // unit-normalized; zero stays zero

  friend bool operator==(const Poly& f, const Poly& g);
  friend bool operator!=(const Poly& f, const Poly& g) { return !(f == g); }
  // Total order: by degree, then coefficient indices from highest degree down.
  // Matches the counting enumeration used for deterministic searches.
  friend bool poly_less(const Poly& f, const Poly& g);

  static std::pair<Poly, Poly> divmod(const Poly& f, const Poly& g);
  friend Poly operator%(const Poly& f, const Poly& g);
  bool divides(const Poly& f) const;  // this | f
  FFElem eval(const FFElem& x) const;
  Poly derivative() const;
  Poly pow(std::uint64_t e) const;
  Poly pow_mod(std::uint64_t e, const Poly& mod) const;
  // x -> x^k on the variable (exponent dilation).
  Poly substitute_power(std::uint64_t k) const;
  // Coefficient-wise inverse Frobenius applied `times` times.
  Poly frobenius_root_coeffs(unsigned times) const;

  bool is_irreducible() const;
  std::optional<Poly> sqrt_exact() const;

  std::string to_string(const std::string& var = "t") const;

 private:
  void trim();
  FFPtr field_;
  std::vector<FFElem> coeffs_;
};

Poly poly_gcd(Poly f, Poly g);           // monic gcd; gcd(0,0) = 0
// All monic irreducibles of the given degree, in counting order.
std::vector<Poly> monic_irreducibles(const FFPtr& field, unsigned degree);
// Unique x mod prod(moduli) with x = residues[i] mod moduli[i]; moduli must be
// pairwise coprime. Result has degree < sum of moduli degrees.
Poly poly_crt(const std::vector<Poly>& residues, const std::vector<Poly>& moduli);
// Multiplicity of pi in f; nullopt (infinity) for f = 0.
std::optional<long> poly_ord(const Poly& f, const Poly& pi);
// Trial-division factorization into monic irreducibles; returns
// (unit constant, [(irreducible, multiplicity)...]) sorted by poly_less.
std::pair<FFElem, std::vector<std::pair<Poly, int>>> poly_factor(const Poly& f);

// ---------------------------------------------------------------------------
// Rational functions over F_q: canonical form has monic denominator and
// gcd(num, den) = 1.
// ---------------------------------------------------------------------------

class RatFunc {
 public:
  RatFunc() = default;
  explicit RatFunc(Poly num);
  RatFunc(Poly num, Poly den);  // canonicalizes; throws on zero denominator

  static RatFunc zero(FFPtr field) { return RatFunc(Poly(std::move(field))); }
  static RatFunc one(FFPtr field);
  static RatFunc from_int(FFPtr field, std::int64_t v);

  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }
  const FFPtr& field() const { return num_.field(); }
  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const { return num_.is_one() && den_.is_one(); }
  bool is_polynomial() const { return den_.is_one(); }

  RatFunc operator-() const;
  friend RatFunc operator+(const RatFunc& x, const RatFunc& y);
  friend RatFunc operator-(const RatFunc& x, const RatFunc& y);
  friend RatFunc operator*(const RatFunc& x, const RatFunc& y);
  friend RatFunc operator/(const RatFunc& x, const RatFunc& y);
  RatFunc inv() const;
  RatFunc pow(std::int64_t e) const;
  RatFunc substitute_power(std::uint64_t k) const;

  friend bool operator==(const RatFunc& x, const RatFunc& y);
  friend bool operator!=(const RatFunc& x, const RatFunc& y) { return !(x == y); }

  // max(deg num, deg den, 0): the enumeration stratum of the element.
  long height() const;
  std::optional<RatFunc> sqrt_exact() const;

  std::string to_string(const std::string& var = "t") const;

 private:
  void canonicalize();
  Poly num_, den_;
};

bool is_zero(const RatFunc& x);

// ---------------------------------------------------------------------------
// Arbitrary-precision rationals: GMP's mpq_class already maintains the
// canonical form gcd(|num|, den) = 1, den > 0.
// ---------------------------------------------------------------------------

using BigInt = mpz_class;
using BigRational = mpq_class;

BigRational make_rational(const BigInt& num, const BigInt& den);
bool is_zero(const BigRational& x);
// ell-adic valuation; nullopt (infinity) for x = 0.
std::optional<long> rational_ord(const BigRational& x, const BigInt& ell);
// max(|num|, den).
BigInt rational_height(const BigRational& x);
std::optional<BigRational> rational_sqrt(const BigRational& x);
std::string rational_to_string(const BigRational& x);

// Trial-division factorization of |n| into (prime, multiplicity) pairs,
// ascending. Throws SearchBoundError past the desk-scale trial bound.
std::vector<std::pair<BigInt, int>> factor_integer(const BigInt& n);
bool is_prime(const BigInt& n);

// ---------------------------------------------------------------------------
// Element literal grammar shared with the CLI:
//   polynomials   2*t^2+t+1     (coefficients as integers mod p; for
//                                non-prime fields also (u+1)*t^2 style)
//   rationals     (t^2+1)/(t+2), -7/15
// Printing produces the canonical form; parse(print(x)) == x.
// ---------------------------------------------------------------------------

RatFunc parse_ratfunc(const std::string& text, const FFPtr& field,
                      const std::string& var = "t");
BigRational parse_bigrational(const std::string& text);
std::string ratfunc_to_string(const RatFunc& x, const std::string& var = "t");

}  // namespace diodef
