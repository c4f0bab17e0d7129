#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "diodef/formula.hpp"
#include "diodef/places.hpp"
#include "diodef/quaternion.hpp"
#include "diodef/symbols.hpp"

namespace diodef {

// ---------------------------------------------------------------------------
// The perfect closure K = F_q(t, t^(1/p), t^(1/p^2), ...) for odd p, its
// extended (no longer discrete) valuations with value group Z[1/p], and the
// diophantine definition of valuation rings in K through a quaternion algebra
// over F_q(t) that stays ramified after perfection.
// ---------------------------------------------------------------------------

// An element of K: a rational function in s = t^(1/p^level), at the minimal
// possible level (the representative is not a rational function of s^p).
class PerfElement {
 public:
  PerfElement() = default;
  static PerfElement from_base(RatFunc rep) { return make(0, std::move(rep)); }
  static PerfElement make(unsigned level, RatFunc rep);

  unsigned level() const { return level_; }
  const RatFunc& rep() const { return rep_; }
  const FFPtr& constants() const { return rep_.field(); }
  bool is_zero() const { return rep_.is_zero(); }

  // Representative in F_q(t^(1/p^lvl)) for any lvl >= level().
  RatFunc rep_at_level(unsigned lvl) const;

  PerfElement operator-() const;
  friend PerfElement operator+(const PerfElement& x, const PerfElement& y);
  friend PerfElement operator-(const PerfElement& x, const PerfElement& y);
  friend PerfElement operator*(const PerfElement& x, const PerfElement& y);
  friend PerfElement operator/(const PerfElement& x, const PerfElement& y);
  friend bool operator==(const PerfElement& x, const PerfElement& y);
  friend bool operator!=(const PerfElement& x, const PerfElement& y) { return !(x == y); }

 private:
  unsigned level_ = 0;
  RatFunc rep_;
};

bool is_zero(const PerfElement& x);

// y with y^p = x; the level rises by at most one and coefficients pass
// through the inverse Frobenius of F_q.
PerfElement pth_root(const PerfElement& x);

// A place of K: the unique extension of a finite place of F_q(t).
struct PerfPlace {
  FqtField::Place base;
  friend bool operator==(const PerfPlace& a, const PerfPlace& b) { return a.base == b.base; }
};

// Field model for K, exposing the slice of the field interface the formula
// and membership machinery needs, plus the perfect-closure specifics.
class PerfField {
 public:
  using Elem = PerfElement;

  explicit PerfField(FFPtr constants);
  static PerfField with_order(std::uint64_t q) { return PerfField(FiniteField::with_order(q)); }

  const FFPtr& constants() const { return base_.constants(); }
  const FqtField& base_field() const { return base_; }
  std::uint32_t characteristic() const { return base_.characteristic(); }

  Elem zero() const { return PerfElement::from_base(base_.zero()); }
  Elem one() const { return PerfElement::from_base(base_.one()); }
  Elem from_int(std::int64_t v) const { return PerfElement::from_base(base_.from_int(v)); }
  Elem from_base(const RatFunc& x) const { return PerfElement::from_base(x); }

  // The defining polynomial of the place at the given level: the coefficient
  // p^level-th root of the base polynomial (Frobenius twist).
  Poly place_poly_at_level(const PerfPlace& v, unsigned level) const;

  // ord in Z[1/p], normalized to agree with the base valuation on F_q(t);
  // nullopt means +infinity (x = 0).
  std::optional<BigRational> ord(const PerfPlace& v, const Elem& x) const;
  bool ord_at_least(const PerfPlace& v, const Elem& x, const BigRational& bound) const;

  // Square class in the completion K_v: the Z[1/p]-order must have even
  // numerator (p odd makes parity well defined) and the unit part must have
  // square residue.
  bool is_local_square(const PerfPlace& v, const Elem& x) const;

  // Residue of an integral element in the level-0 residue field F_q[t]/pi,
  // pulled back through the canonical identification of residue fields.
  FFPtr residue_field(const PerfPlace& v) const { return base_.residue_field(v.base); }
  FFElem residue(const PerfPlace& v, const Elem& x) const;

  // Partial fractions at v on the element's level.
  std::pair<Elem, Elem> split_at(const PerfPlace& v, const Elem& x) const;

  // All canonical elements of level <= maxlevel and height <= B (height of
  // the level-l representative), deterministic order.
  std::vector<Elem> elements_up_to(unsigned maxlevel, long B) const;

  std::string to_string(const Elem& x) const;
  Elem parse(const std::string& text) const;

 private:
  FqtField base_;
};

// ---------------------------------------------------------------------------
// Integral bases of O_D over the semilocal ring O = F_q[t] localized away
// from the two ramified places.
// ---------------------------------------------------------------------------

struct IntegralBasis {
  RatFunc a, b;  // structure constants after square rescaling to ord in {0,1}
  std::array<QuatElem<RatFunc>, 4> basis;      // a1 = 1, tr(a_i) = 0 for i >= 2
  std::array<std::array<RatFunc, 4>, 4> gram;  // nr(sum x_i basis_i) = x^T G x
  RatFunc det;  // determinant of the basis in coordinates of (1, i, j, ij)
};

// Lattice saturation from the standard order of H(a, b), then trace
// normalization. Requires ram_set(a, b) = {v1, v2}; throws SearchBoundError
// if saturation exceeds the discriminant-valuation bound.
IntegralBasis integral_basis(const FqtField& K, const FqtField::Place& v1,
                             const FqtField::Place& v2, const RatFunc& a, const RatFunc& b);

// ---------------------------------------------------------------------------
// The assembled definition over K.
// ---------------------------------------------------------------------------

struct PerfCopy {
  FqtField::Place helper;
  RatFunc a, b;  // ram_set = {target, helper}; order 2 in the Brauer group
  IntegralBasis basis;
  FFElem shift1, shift2;  // nonsquare shifts in the residue fields k1, k2
  // alpha lifts: alpha[i*n2 + j] has residue i at target and j at helper
  // (counting order of the residue fields).
  std::vector<PerfElement> alphas;
  std::uint64_t n1 = 0, n2 = 0;
};

struct PerfIntegralityDefinition {
  PerfField field;
  FqtField::Place target;  // p1
  std::array<PerfCopy, 2> copies;
  FormulaNode<PerfField> formula;
};

struct PerfCopyTrace {
  bool member = false;
  std::optional<std::size_t> shift_hit;
  std::size_t shifts_tried = 0;
};

struct PerfDecisionTrace {
  bool verdict = false;
  PerfElement y, z;
  PerfCopyTrace copy[2];
};

// Membership in the norm-one set T, decided through the split-field chain:
// x1 in T iff x1 is integral at both places and either x1 = +-1 or x1^2 - 1
// is a local nonsquare at both.
bool t_perf_membership(const PerfField& K, const FqtField::Place& target,
                       const PerfCopy& copy, const PerfElement& x1);

// O^perf membership via the coset union over the alpha shifts.
bool operf_membership(const PerfField& K, const FqtField::Place& target, const PerfCopy& copy,
                      const PerfElement& x, PerfCopyTrace* trace = nullptr);

// The shift index the covering argument predicts for an integral element.
std::size_t matched_shift_index(const PerfField& K, const FqtField::Place& target,
                                const PerfCopy& copy, const PerfElement& x);

PerfDecisionTrace decide_perf(const PerfField& K, const PerfIntegralityDefinition& def,
                              const PerfElement& x);

PerfIntegralityDefinition build_perf_definition(const PerfField& K,
                                                const FqtField::Place& target,
                                                const SearchLimits& limits = {});

FormulaNode<PerfField> emit_perf_formula(const PerfField& K,
                                         const PerfIntegralityDefinition& def);

}  // namespace diodef
