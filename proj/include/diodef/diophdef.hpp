#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "diodef/formula.hpp"
#include "diodef/quadforms.hpp"

namespace diodef {

// ---------------------------------------------------------------------------
// The diophantine definition of the valuation ring R_p = {x : ord_p(x) >= 0}
// over F_q(t) (q odd) and over Q.
//
// One copy handles one helper place q': with ord_p(p) = 1, ord_q'(p) = 0,
// ord_p(q) = 0, ord_q'(q) = 1 and a quaternion algebra H(a, b) ramified at
// exactly {p-place, q'}, the set
//     T = { x1 : exists x2 x3 x4,  x1^2 - a x2^2 - b x3^2 + ab x4^2 = p q }
// satisfies  p^(r+1) R_p  cap  q^(r+1) R_q'  subseteq  (pq)^r T  subseteq
// R_p cap R_q', so finitely many coset translates of S = (pq)^r T cover
// R_p cap R_q'. Two copies with distinct helpers and the additive split
// R_p = (R_p cap R_q') + (R_p cap R_l) give the full valuation ring.
// ---------------------------------------------------------------------------

template <class F>
struct DefinitionCopy {
  typename F::Place helper;
  typename F::Elem p, q;  // ord conditions as above, re-verified on build
  typename F::Elem a, b;  // ram_set(a, b) = {target, helper}, re-verified
  long r = 0;             // verified rescaling exponent
  std::vector<typename F::Elem> coset_reps;  // CRT lifts, residue-pair row-major
  std::uint64_t helper_classes = 0;          // modulus count at the helper place
};

template <class F>
struct IntegralityDefinition {
  F field;
  typename F::Place target;
  std::array<DefinitionCopy<F>, 2> copies;
  FormulaNode<F> formula;
};

struct CopyTrace {
  bool member = false;
  std::optional<std::size_t> coset_hit;
  std::size_t cosets_tried = 0;
};

template <class F>
struct DecisionTrace {
  bool verdict = false;
  typename F::Elem y, z;  // the additive split, y through copy 0, z through copy 1
  CopyTrace copy[2];
};

namespace detail {

inline bool pipeline_place_ok(const FqtField& K, const FqtField::Place& v) {
  return K.odd_characteristic() && v.is_finite();
}
inline bool pipeline_place_ok(const RationalField&, const RationalField::Place& v) {
  return v.is_finite() && v.ell != 2;
}

// Position of a residue representative inside residue_system(v, k).
inline std::uint64_t residue_index(const FqtField& K, const FqtField::Place& v,
                                   const Poly& rep, long k) {
  std::uint64_t idx = 0;
  std::uint64_t scale = 1;
  const unsigned digits = static_cast<unsigned>(k) * v.deg();
  for (unsigned i = 0; i < digits; ++i) {
    const std::uint64_t ci =
        (static_cast<int>(i) <= rep.degree()) ? rep.coeff(i).index() : 0;
    idx += ci * scale;
    scale *= K.q();
  }
  return idx;
}

inline std::uint64_t residue_index(const RationalField&, const RationalField::Place&,
                                   const BigInt& rep, long) {
  return rep.get_ui();
}

}  // namespace detail

// T membership for one copy: decidable through the ternary Hasse-Minkowski
// engine. x1 in T iff <a, b, -ab> represents x1^2 - pq; the quick valuation
// filter is a proven consequence of membership ((pq)^r T lies in R_p cap R_q).
template <class F>
bool t_membership(const F& K, const typename F::Place& target, const DefinitionCopy<F>& copy,
                  const typename F::Elem& x1) {
  if (!K.ord_at_least(target, x1, -copy.r)) return false;
  if (!K.ord_at_least(copy.helper, x1, -copy.r)) return false;
  const typename F::Elem pq = copy.p * copy.q;
  const typename F::Elem c = x1 * x1 - pq;
  if (is_zero(c))
    throw VerificationError("x1^2 = pq impossible: ord of pq at the target place is odd");
  DiagForm<F> ternary{{copy.a, copy.b, K.zero() - copy.a * copy.b}};
  return global_represents(K, ternary, c);
}

// Membership in R_target cap R_helper via the coset union of S = (pq)^r T.
// The residue-matched coset is tried first; the scan stays exhaustive so the
// verdict never depends on the matching shortcut.
template <class F>
bool rpq_membership(const F& K, const typename F::Place& target,
                    const DefinitionCopy<F>& copy, const typename F::Elem& x,
                    CopyTrace* trace = nullptr) {
  const typename F::Elem pq = copy.p * copy.q;
  const typename F::Elem scale = elem_pow(K, pq, copy.r);
  std::vector<std::size_t> order;
  order.reserve(copy.coset_reps.size());
  if (K.ord_at_least(target, x, 0) && K.ord_at_least(copy.helper, x, 0)) {
    const auto rt = K.mod_power(target, x, copy.r + 1);
    const auto rh = K.mod_power(copy.helper, x, copy.r + 1);
    const std::uint64_t it = detail::residue_index(K, target, rt, copy.r + 1);
    const std::uint64_t ih = detail::residue_index(K, copy.helper, rh, copy.r + 1);
    order.push_back(it * copy.helper_classes + ih);
  }
  for (std::size_t k = 0; k < copy.coset_reps.size(); ++k)
    if (order.empty() || k != order[0]) order.push_back(k);
  std::size_t tried = 0;
  for (std::size_t k : order) {
    ++tried;
    const typename F::Elem x1 = (x - copy.coset_reps[k]) / scale;
    if (t_membership(K, target, copy, x1)) {
      if (trace) {
        trace->member = true;
        trace->coset_hit = k;
        trace->cosets_tried = tried;
      }
      return true;
    }
  }
  if (trace) {
    trace->member = false;
    trace->coset_hit.reset();
    trace->cosets_tried = tried;
  }
  return false;
}

// The full decision: split x = y + z with y supported at the second helper
// only (partial fractions), so y always lies in the first copy's ring and z
// carries the target behavior into the second copy.
template <class F>
DecisionTrace<F> decide(const F& K, const IntegralityDefinition<F>& def,
                        const typename F::Elem& x) {
  DecisionTrace<F> tr;
  auto [sing, rest] = K.split_at(def.copies[1].helper, x);
  tr.y = sing;
  tr.z = rest;
  const bool m0 = rpq_membership(K, def.target, def.copies[0], tr.y, &tr.copy[0]);
  const bool m1 = rpq_membership(K, def.target, def.copies[1], tr.z, &tr.copy[1]);
  tr.verdict = m0 && m1;
  return tr;
}

namespace detail {

// Formula fragment: w is in R_target cap R_helper, as the coset disjunction
// over s_k of  exists x1..x4 : w - s_k = (pq)^r x1  and  nr-form(x1..x4) = pq.
template <class F>
FormulaNode<F> copy_membership_formula(const F& K, const DefinitionCopy<F>& copy,
                                       const std::string& wvar, const std::string& prefix) {
  using P = FPoly<F>;
  const typename F::Elem pq = copy.p * copy.q;
  const typename F::Elem scale = elem_pow(K, pq, copy.r);
  std::vector<FormulaNode<F>> branches;
  branches.reserve(copy.coset_reps.size());
  for (std::size_t k = 0; k < copy.coset_reps.size(); ++k) {
    const std::string base = prefix + "_k" + std::to_string(k) + "_x";
    const std::vector<std::string> vars = {base + "1", base + "2", base + "3", base + "4"};
    P x1 = P::variable(K, vars[0]);
    P x2 = P::variable(K, vars[1]);
    P x3 = P::variable(K, vars[2]);
    P x4 = P::variable(K, vars[3]);
    P w = P::variable(K, wvar);
    // w - s_k - (pq)^r x1 = 0
    P link = w - P::constant(K, copy.coset_reps[k]) - P::constant(K, scale) * x1;
    // x1^2 - a x2^2 - b x3^2 + ab x4^2 - pq = 0
    P norm = x1 * x1 - P::constant(K, copy.a) * x2 * x2 -
             P::constant(K, copy.b) * x3 * x3 +
             P::constant(K, copy.a * copy.b) * x4 * x4 - P::constant(K, pq);
    branches.push_back(FormulaNode<F>::exists(
        vars, FormulaNode<F>::conj({FormulaNode<F>::eq(std::move(link)),
                                    FormulaNode<F>::eq(std::move(norm))})));
  }
  return FormulaNode<F>::disj(std::move(branches));
}

}  // namespace detail

// x in R_target  iff  exists y, z : x = y + z, y in copy-0 ring, z in copy-1
// ring. Free variable: "x".
template <class F>
FormulaNode<F> emit_formula(const F& K, const IntegralityDefinition<F>& def) {
  using P = FPoly<F>;
  P x = P::variable(K, "x");
  P y = P::variable(K, "y");
  P z = P::variable(K, "z");
  FormulaNode<F> split = FormulaNode<F>::eq(x - y - z);
  FormulaNode<F> m0 = detail::copy_membership_formula(K, def.copies[0], "y", "y");
  FormulaNode<F> m1 = detail::copy_membership_formula(K, def.copies[1], "z", "z");
  return FormulaNode<F>::exists(
      {"y", "z"},
      FormulaNode<F>::conj({std::move(split), std::move(m0), std::move(m1)}));
}

// Characteristic-2 variant of the T-set equation, emitted as a formula only:
// the distinguished (free) variable is x3, the reduced-trace coordinate, and
// the equation is the Char2 reduced norm minus pq. No membership decision is
// offered in characteristic 2 (the local symbol theory is out of scope).
inline FormulaNode<FqtField> emit_formula_char2(const FqtField& K, const RatFunc& a,
                                                const RatFunc& b, const RatFunc& p,
                                                const RatFunc& q) {
  if (K.odd_characteristic())
    throw ArgumentError("char-2 formula emission requires a characteristic-2 field");
  if (is_zero(a) || is_zero(b) || is_zero(p) || is_zero(q))
    throw ArgumentError("char-2 formula emission requires nonzero data");
  using P = FPoly<FqtField>;
  P x1 = P::variable(K, "x1");
  P x2 = P::variable(K, "x2");
  P x3 = P::variable(K, "x3");
  P x4 = P::variable(K, "x4");
  P norm = x1 * x1 + x1 * x3 + P::constant(K, b) * x3 * x3 +
           P::constant(K, a) * (x2 * x2 + x2 * x4 + P::constant(K, b) * x4 * x4) -
           P::constant(K, p * q);
  return FormulaNode<FqtField>::exists({"x1", "x2", "x4"}, FormulaNode<FqtField>::eq(norm));
}

template <class F>
DefinitionCopy<F> build_copy(const F& K, const typename F::Place& target,
                             const typename F::Place& helper, const SearchLimits& limits) {
  DefinitionCopy<F> copy;
  copy.helper = helper;
  copy.p = K.uniformizer(target);
  copy.q = K.uniformizer(helper);
  // re-verify the four ord conditions
  if (!(K.ord(target, copy.p) == std::optional<long>(1) &&
        K.ord(helper, copy.p) == std::optional<long>(0) &&
        K.ord(target, copy.q) == std::optional<long>(0) &&
        K.ord(helper, copy.q) == std::optional<long>(1)))
    throw VerificationError("uniformizing pair fails its ord conditions");

  RamificationData<F> alg = find_ramified_algebra(K, target, helper, limits);
  copy.a = alg.a;
  copy.b = alg.b;

  // r bounds the denominators of coordinates of integral quaternions: trace
  // extraction gives ord_v(x_i) >= -(ord_v(a) + ord_v(b)) on the valuation
  // ring, at both ramified places.
  long r = 0;
  for (const auto& v : {target, helper})
    r = std::max(r, *K.ord(v, copy.a) + *K.ord(v, copy.b));
  if (r < 0) throw VerificationError("negative rescaling exponent");
  copy.r = r;

  const std::uint64_t nt = [&] {
    std::uint64_t n = 1;
    for (long i = 0; i <= r; ++i) n *= K.residue_size(target);
    return n;
  }();
  const std::uint64_t nh = [&] {
    std::uint64_t n = 1;
    for (long i = 0; i <= r; ++i) n *= K.residue_size(helper);
    return n;
  }();
  if (nt > limits.coset_cap || nh > limits.coset_cap || nt * nh > limits.coset_cap)
    throw SearchBoundError("coset system of size " + std::to_string(nt * nh) +
                           " exceeds the configured cap");
  copy.helper_classes = nh;

  // CRT lifts of all residue pairs mod target^(r+1) x helper^(r+1), row-major
  // in the residue enumeration order.
  const auto reps_t = K.residue_system(target, r + 1);
  const auto reps_h = K.residue_system(helper, r + 1);
  copy.coset_reps.reserve(nt * nh);
  for (const auto& rt : reps_t) {
    for (const auto& rh : reps_h) {
      const typename F::Elem lift = K.approximate(
          {F::Target::congruent(target, typename F::Elem(rt), r + 1),
           F::Target::congruent(helper, typename F::Elem(rh), r + 1)});
      copy.coset_reps.push_back(lift);
    }
  }
  return copy;
}

// Deterministic full construction: helpers are the first places after the
// target in the canonical order, all invariants re-verified before return.
template <class F>
IntegralityDefinition<F> build_definition(const F& K, const typename F::Place& target,
                                          const SearchLimits& limits = {}) {
  if (!detail::pipeline_place_ok(K, target))
    throw ArgumentError("target place must be finite with odd residue characteristic");
  IntegralityDefinition<F> def{K, target, {}, {}};
  const typename F::Place h1 = K.next_finite_place({target});
  const typename F::Place h2 = K.next_finite_place({target, h1});
  def.copies[0] = build_copy(K, target, h1, limits);
  def.copies[1] = build_copy(K, target, h2, limits);
  def.formula = emit_formula(K, def);
  return def;
}

}  // namespace diodef
