#pragma once

#include <optional>
#include <vector>

#include "diodef/symbols.hpp"

namespace diodef {

// ---------------------------------------------------------------------------
// Diagonal quadratic forms: local and global isotropy / representability.
// Ranks up to 4 (the quaternion norm form) are supported; they are all the
// pipelines need.
//
// Conventions, fixed here and cross-validated against the enumeration oracle:
//   hasse(f)  = prod_{i<j} (c_i, c_j)_v
//   rank 2    isotropic iff -c1 c2 is a local square
//   rank 3    isotropic iff (-c1 c3, -c2 c3)_v = +1
//   rank 4    anisotropic iff disc(f) is the trivial square class and
//             hasse(f) = -(-1,-1)_v
// At the real place of Q isotropy of any rank is a sign condition.
// ---------------------------------------------------------------------------

template <class F>
struct DiagForm {
  std::vector<typename F::Elem> coeffs;
};

template <class F>
void validate_form(const DiagForm<F>& f) {
  if (f.coeffs.empty()) throw ArgumentError("diagonal form needs at least one coefficient");
  for (const auto& c : f.coeffs)
    if (is_zero(c)) throw ArgumentError("diagonal form coefficients must be nonzero");
}

template <class F>
int hasse_symbol(const F& K, const typename F::Place& v, const DiagForm<F>& f) {
  int s = 1;
  for (size_t i = 0; i < f.coeffs.size(); ++i)
    for (size_t j = i + 1; j < f.coeffs.size(); ++j)
      s *= hilbert_symbol(K, v, f.coeffs[i], f.coeffs[j]);
  return s;
}

namespace detail {

inline bool archimedean(const FqtField&, const FqtField::Place&) { return false; }
inline bool archimedean(const RationalField&, const RationalField::Place& v) {
  return !v.is_finite();
}

}  // namespace detail

template <class F>
bool local_isotropic(const F& K, const typename F::Place& v, const DiagForm<F>& f) {
  validate_form(f);
  const size_t n = f.coeffs.size();
  if (n == 1) return false;
  if (detail::archimedean(K, v)) {
    // isotropic over R iff the signs are mixed
    for (size_t i = 0; i < n; ++i)
      for (size_t j = i + 1; j < n; ++j)
        if (!K.is_local_square(v, f.coeffs[i] * f.coeffs[j])) return true;
    return false;
  }
  if (n == 2) {
    const typename F::Elem d = K.zero() - f.coeffs[0] * f.coeffs[1];
    return K.is_local_square(v, d);
  }
  if (n == 3) {
    const typename F::Elem a = K.zero() - f.coeffs[0] * f.coeffs[2];
    const typename F::Elem b = K.zero() - f.coeffs[1] * f.coeffs[2];
    return hilbert_symbol(K, v, a, b) == 1;
  }
  if (n == 4) {
    typename F::Elem d = K.one();
    for (const auto& c : f.coeffs) d = d * c;
    if (!K.is_local_square(v, d)) return true;
    const typename F::Elem m1 = K.zero() - K.one();
    const int target = -hilbert_symbol(K, v, m1, m1);
    return hasse_symbol(K, v, f) != target;
  }
  throw ArgumentError("local isotropy implemented for rank <= 4 only");
}

// f represents c (c != 0) iff f orthogonal <-c> is isotropic; rank f <= 3.
template <class F>
bool local_represents(const F& K, const typename F::Place& v, const DiagForm<F>& f,
                      const typename F::Elem& c) {
  validate_form(f);
  if (is_zero(c)) throw ArgumentError("representability of zero is handled by the caller");
  if (f.coeffs.size() > 3)
    throw ArgumentError("local representability implemented for rank <= 3 only");
  DiagForm<F> g = f;
  g.coeffs.push_back(K.zero() - c);
  return local_isotropic(K, v, g);
}

// Hasse-Minkowski: c is represented globally iff it is represented at every
// place of the finite bad set (coefficient and target supports plus the
// mandatory places); everywhere else representability is automatic.
template <class F>
bool global_represents(const F& K, const DiagForm<F>& f, const typename F::Elem& c) {
  validate_form(f);
  if (is_zero(c)) throw ArgumentError("representability of zero is handled by the caller");
  if (f.coeffs.size() > 3)
    throw ArgumentError("global representability implemented for rank <= 3 only");
  std::vector<typename F::Place> bad;
  auto add = [&](const typename F::Place& v) {
    for (const auto& w : bad)
      if (w == v) return;
    bad.push_back(v);
  };
  for (const auto& ci : f.coeffs)
    for (const auto& v : K.support(ci)) add(v);
  for (const auto& v : K.support(c)) add(v);
  for (const auto& v : K.mandatory_bad_places()) add(v);
  for (const auto& v : bad)
    if (!local_represents(K, v, f, c)) return false;
  return true;
}

namespace detail {

// Raw-arithmetic scan used by the FqtField overload below; same verdicts and
// the same deterministic order as the generic loop, substantially faster.
std::optional<std::array<RatFunc, 3>> ternary_witness_scan_fqt(
    const FqtField& K, const std::array<RatFunc, 3>& coeffs, const RatFunc& c, long bound);

}  // namespace detail

// Exhaustive witness search: enumerate all but the last coordinate over the
// canonical elements of height <= bound and solve the last one exactly. A
// found witness is re-verified by substitution; NotFound is conclusive only
// against witnesses whose leading coordinates lie within the bound.
template <class F>
std::optional<std::vector<typename F::Elem>> witness_search(const F& K, const DiagForm<F>& f,
                                                            const typename F::Elem& c,
                                                            long bound) {
  validate_form(f);
  const size_t n = f.coeffs.size();
  const auto elems = K.elements_of_height_at_most(bound);
  std::vector<size_t> idx(n - 1, 0);
  while (true) {
    typename F::Elem rhs = c;
    std::vector<typename F::Elem> w;
    w.reserve(n);
    for (size_t i = 0; i + 1 < n; ++i) {
      const auto& xi = elems[idx[i]];
      rhs = rhs - f.coeffs[i] * xi * xi;
      w.push_back(xi);
    }
    const typename F::Elem target = rhs / f.coeffs[n - 1];
    if (auto root = K.sqrt(target)) {
      w.push_back(*root);
      bool trivial = true;
      for (const auto& x : w)
        if (!is_zero(x)) trivial = false;
      if (!trivial) {
        typename F::Elem check = K.zero();
        for (size_t i = 0; i < n; ++i) check = check + f.coeffs[i] * w[i] * w[i];
        if (!(check == c)) throw VerificationError("witness fails substitution re-check");
        return w;
      }
    }
    if (n == 1) break;
    size_t i = 0;
    while (i + 1 < n && ++idx[i] == elems.size()) idx[i++] = 0;
    if (i + 1 == n) break;
  }
  return std::nullopt;
}

inline std::optional<std::vector<RatFunc>> witness_search(const FqtField& K,
                                                          const DiagForm<FqtField>& f,
                                                          const RatFunc& c, long bound) {
  validate_form(f);
  const bool fast = f.coeffs.size() == 3 && K.constants()->degree() == 1 &&
                    f.coeffs[0].is_polynomial() && f.coeffs[1].is_polynomial() &&
                    f.coeffs[2].is_polynomial();
  if (fast) {
    auto w = detail::ternary_witness_scan_fqt(
        K, {f.coeffs[0], f.coeffs[1], f.coeffs[2]}, c, bound);
    if (!w) return std::nullopt;
    return std::vector<RatFunc>{(*w)[0], (*w)[1], (*w)[2]};
  }
  return witness_search<FqtField>(K, f, c, bound);
}

}  // namespace diodef
