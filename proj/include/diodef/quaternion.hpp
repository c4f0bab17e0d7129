#pragma once

#include <array>

#include "diodef/errors.hpp"

namespace diodef {

// ---------------------------------------------------------------------------
// Quaternion algebras H(a, b) with exact multiplication, reduced trace and
// reduced norm, over any element type supporting field arithmetic.
//
// OddChar presentation: basis (1, i, j, ij) with i^2 = a, j^2 = b, ij = -ji.
// Char2 presentation:   basis (1, u, v, uv) with u^2 = a, v^2 = v + b and the
//                       products uv = w, vu = w + u, w^2 = ab, vw = bu,
//                       wv = bu + w, wu = a + av, uw = av.
// ---------------------------------------------------------------------------

enum class QuatPresentation { OddChar, Char2 };

template <class Elem>
struct QuatAlgebra {
  Elem a;
  Elem b;
  QuatPresentation pres = QuatPresentation::OddChar;

  QuatAlgebra(Elem a_, Elem b_, QuatPresentation p) : a(std::move(a_)), b(std::move(b_)), pres(p) {
    using diodef::is_zero;
    if (is_zero(a) || is_zero(b))
      throw ArgumentError("quaternion algebra requires nonzero structure constants");
    const Elem two = one() + one();
    if (pres == QuatPresentation::OddChar && is_zero(two))
      throw ArgumentError("OddChar presentation requires characteristic != 2");
    if (pres == QuatPresentation::Char2 && !is_zero(two))
      throw ArgumentError("Char2 presentation requires characteristic 2");
  }

  Elem zero() const { return a - a; }
  Elem one() const { return a / a; }
};

template <class Elem>
struct QuatElem {
  // Coordinates with respect to (1, i, j, ij) or (1, u, v, uv).
  std::array<Elem, 4> c;
};

template <class Elem>
QuatElem<Elem> quat_from_coords(const QuatAlgebra<Elem>&, Elem x1, Elem x2, Elem x3, Elem x4) {
  return {{{std::move(x1), std::move(x2), std::move(x3), std::move(x4)}}};
}

template <class Elem>
QuatElem<Elem> quat_scalar(const QuatAlgebra<Elem>& A, const Elem& s) {
  return {{{s, A.zero(), A.zero(), A.zero()}}};
}

template <class Elem>
QuatElem<Elem> quat_add(const QuatElem<Elem>& x, const QuatElem<Elem>& y) {
  return {{{x.c[0] + y.c[0], x.c[1] + y.c[1], x.c[2] + y.c[2], x.c[3] + y.c[3]}}};
}

template <class Elem>
QuatElem<Elem> quat_sub(const QuatElem<Elem>& x, const QuatElem<Elem>& y) {
  return {{{x.c[0] - y.c[0], x.c[1] - y.c[1], x.c[2] - y.c[2], x.c[3] - y.c[3]}}};
}

template <class Elem>
QuatElem<Elem> quat_scale(const QuatElem<Elem>& x, const Elem& s) {
  return {{{x.c[0] * s, x.c[1] * s, x.c[2] * s, x.c[3] * s}}};
}

template <class Elem>
bool quat_eq(const QuatElem<Elem>& x, const QuatElem<Elem>& y) {
  return x.c[0] == y.c[0] && x.c[1] == y.c[1] && x.c[2] == y.c[2] && x.c[3] == y.c[3];
}

template <class Elem>
bool quat_is_zero(const QuatElem<Elem>& x) {
  using diodef::is_zero;
  return is_zero(x.c[0]) && is_zero(x.c[1]) && is_zero(x.c[2]) && is_zero(x.c[3]);
}

template <class Elem>
QuatElem<Elem> quat_mul(const QuatAlgebra<Elem>& A, const QuatElem<Elem>& x,
                        const QuatElem<Elem>& y) {
  const Elem &a = A.a, &b = A.b;
  const auto &u = x.c, &v = y.c;
  if (A.pres == QuatPresentation::OddChar) {
    return {{{
        u[0] * v[0] + a * (u[1] * v[1]) + b * (u[2] * v[2]) - a * b * (u[3] * v[3]),
        u[0] * v[1] + u[1] * v[0] - b * (u[2] * v[3]) + b * (u[3] * v[2]),
        u[0] * v[2] + u[2] * v[0] + a * (u[1] * v[3]) - a * (u[3] * v[1]),
        u[0] * v[3] + u[3] * v[0] + u[1] * v[2] - u[2] * v[1],
    }}};
  }
  // characteristic 2 table
  return {{{
      u[0] * v[0] + a * (u[1] * v[1]) + b * (u[2] * v[2]) + a * (u[3] * v[1]) +
          a * b * (u[3] * v[3]),
      u[0] * v[1] + u[1] * v[0] + u[2] * v[1] + b * (u[2] * v[3]) + b * (u[3] * v[2]),
      u[0] * v[2] + u[2] * v[0] + u[2] * v[2] + a * (u[1] * v[3]) + a * (u[3] * v[1]),
      u[0] * v[3] + u[3] * v[0] + u[1] * v[2] + u[2] * v[1] + u[3] * v[2],
  }}};
}

// OddChar: 2*x1. Char2: x3.
template <class Elem>
Elem reduced_trace(const QuatAlgebra<Elem>& A, const QuatElem<Elem>& x) {
  if (A.pres == QuatPresentation::OddChar) return x.c[0] + x.c[0];
  return x.c[2];
}

// OddChar: x1^2 - a x2^2 - b x3^2 + ab x4^2.
// Char2:   x1^2 + x1 x3 + b x3^2 + a (x2^2 + x2 x4 + b x4^2).
template <class Elem>
Elem reduced_norm(const QuatAlgebra<Elem>& A, const QuatElem<Elem>& x) {
  const Elem &a = A.a, &b = A.b;
  const auto& c = x.c;
  if (A.pres == QuatPresentation::OddChar)
    return c[0] * c[0] - a * (c[1] * c[1]) - b * (c[2] * c[2]) + a * b * (c[3] * c[3]);
  return c[0] * c[0] + c[0] * c[2] + b * (c[2] * c[2]) +
         a * (c[1] * c[1] + c[1] * c[3] + b * (c[3] * c[3]));
}

// conj(x) = tr(x) * 1 - x, so that x * conj(x) = nr(x).
template <class Elem>
QuatElem<Elem> quat_conj(const QuatAlgebra<Elem>& A, const QuatElem<Elem>& x) {
  return quat_sub(quat_scalar(A, reduced_trace(A, x)), x);
}

// Every quaternion satisfies X^2 - tr(x) X + nr(x) = 0.
template <class Elem>
bool char_poly_check(const QuatAlgebra<Elem>& A, const QuatElem<Elem>& x) {
  QuatElem<Elem> lhs = quat_mul(A, x, x);
  lhs = quat_sub(lhs, quat_scale(x, reduced_trace(A, x)));
  lhs = quat_add(lhs, quat_scalar(A, reduced_norm(A, x)));
  return quat_is_zero(lhs);
}

// The isomorphism H(a, b) = H(a s^2, b r^2) realized on coordinates:
// (x1, x2, x3, x4) -> (x1, x2/s, x3/r, x4/(s r)). Reduced norms agree.
template <class Elem>
QuatElem<Elem> quat_rescale_coords(const QuatElem<Elem>& x, const Elem& s, const Elem& r) {
  return {{{x.c[0], x.c[1] / s, x.c[2] / r, x.c[3] / (s * r)}}};
}

}  // namespace diodef
