// Tight inner loop for ternary witness scans over F_p(t): the enumeration in
// witness_search dominates acceptance-scale falsification runs, so this path
// works on raw coefficient buffers and defers all rational-function
// arithmetic to the (rare) hits. Verdicts and scan order are identical to the
// generic loop; hits are re-verified by substitution before returning.
//
// The test being scanned: with x2 = n2/d2, x3 = n3/d3,
//   (c - f0 x2^2 - f1 x3^2) / f2 is a square in F_p(t)
// iff  S := U_i * d3^2 - G_j * d2^2  is a polynomial square, where
//   U_i = (cn * d2^2 - f0 cd * n2^2) * (cd f2),  G_j = (f1 cd * cd f2) * n3^2
// and f0, f1, f2 are polynomials (the general case clears denominators first).

#include "diodef/quadforms.hpp"

namespace diodef::detail {

namespace {

constexpr int kCap = 512;

struct Buf {
  std::array<std::uint32_t, kCap> c;
  int len = 0;  // number of coefficients; 0 encodes the zero polynomial

  int deg() const { return len - 1; }
};

void trim(Buf& b) {
  while (b.len > 0 && b.c[b.len - 1] == 0) --b.len;
}

void from_poly(const Poly& f, Buf& out) {
  out.len = f.degree() + 1;
  if (out.len > kCap) throw SearchBoundError("witness scan degree beyond buffer cap");
  for (int i = 0; i < out.len; ++i)
    out.c[i] = static_cast<std::uint32_t>(f.coeff(i).index());
}

void mul(const Buf& a, const Buf& b, std::uint32_t p, Buf& out) {
  if (a.len == 0 || b.len == 0) {
    out.len = 0;
    return;
  }
  out.len = a.len + b.len - 1;
  if (out.len > kCap) throw SearchBoundError("witness scan degree beyond buffer cap");
  std::fill(out.c.begin(), out.c.begin() + out.len, 0);
  for (int i = 0; i < a.len; ++i) {
    const std::uint64_t ai = a.c[i];
    if (ai == 0) continue;
    for (int j = 0; j < b.len; ++j)
      out.c[i + j] = static_cast<std::uint32_t>((out.c[i + j] + ai * b.c[j]) % p);
  }
  trim(out);
}

void sub(const Buf& a, const Buf& b, std::uint32_t p, Buf& out) {
  out.len = std::max(a.len, b.len);
  for (int i = 0; i < out.len; ++i) {
    const std::uint32_t x = i < a.len ? a.c[i] : 0;
    const std::uint32_t y = i < b.len ? b.c[i] : 0;
    out.c[i] = (x + p - y) % p;
  }
  trim(out);
}

std::uint32_t sc_inv(std::uint32_t a, std::uint32_t p) {
  std::int64_t t = 0, nt = 1, r = p, nr = a % p;
  while (nr != 0) {
    const std::int64_t q = r / nr;
    std::swap(t -= q * nt, nt);
    std::swap(r -= q * nr, nr);
  }
  return static_cast<std::uint32_t>(t < 0 ? t + p : t);
}

// exact polynomial square test over F_p, odd p; scratch holds the root
bool is_square_poly(const Buf& f, std::uint32_t p, const std::vector<char>& sq_scalar,
                    Buf& root, Buf& scratch) {
  if (f.len == 0) return true;
  const int deg = f.deg();
  if (deg % 2 != 0) return false;
  if (!sq_scalar[f.c[deg]]) return false;
  std::uint32_t lc_root = 0;
  for (std::uint32_t c = 1; c < p; ++c)
    if (c * c % p == f.c[deg]) {
      lc_root = c;
      break;
    }
  const int m = deg / 2;
  root.len = m + 1;
  std::fill(root.c.begin(), root.c.begin() + root.len, 0);
  root.c[m] = lc_root;
  const std::uint32_t inv2lc = sc_inv(2 * lc_root % p, p);
  for (int i = m - 1; i >= 0; --i) {
    std::uint64_t acc = (m + i) < f.len ? f.c[m + i] : 0;
    for (int j = i + 1; j <= m; ++j) {
      const int k = m + i - j;
      if (k <= i || k > m) continue;
      acc += static_cast<std::uint64_t>(p) * p -
             static_cast<std::uint64_t>(root.c[j]) * root.c[k] % p;
    }
    root.c[i] = static_cast<std::uint32_t>(acc % p * inv2lc % p);
  }
  mul(root, root, p, scratch);
  if (scratch.len != f.len) return false;
  for (int i = 0; i < f.len; ++i)
    if (scratch.c[i] != f.c[i]) return false;
  return true;
}

}  // namespace

std::optional<std::array<RatFunc, 3>> ternary_witness_scan_fqt(
    const FqtField& K, const std::array<RatFunc, 3>& coeffs, const RatFunc& c, long bound) {
  const std::uint32_t p = K.characteristic();
  std::vector<char> sq_scalar(p, 0);
  for (std::uint32_t u = 0; u < p; ++u) sq_scalar[u * u % p] = 1;

  for (const auto& f : coeffs)
    if (!f.is_polynomial())
      throw ArgumentError("fast witness scan requires polynomial form coefficients");

  const auto elems = K.elements_of_height_at_most(bound);
  const size_t n = elems.size();

  // one-off tables
  std::vector<Buf> sqn(n), sqd(n);
  {
    Buf tn, td;
    for (size_t i = 0; i < n; ++i) {
      from_poly(elems[i].num(), tn);
      from_poly(elems[i].den(), td);
      mul(tn, tn, p, sqn[i]);
      mul(td, td, p, sqd[i]);
    }
  }

  Buf cn, cd, f0, f1, f2;
  from_poly(c.num(), cn);
  from_poly(c.den(), cd);
  from_poly(coeffs[0].num(), f0);
  from_poly(coeffs[1].num(), f1);
  from_poly(coeffs[2].num(), f2);

  Buf cdf2, f0cd, f1cdf2, tmp;
  mul(cd, f2, p, cdf2);
  mul(f0, cd, p, f0cd);
  mul(f1, cd, p, tmp);
  mul(tmp, cdf2, p, f1cdf2);

  std::vector<Buf> G(n);
  for (size_t j = 0; j < n; ++j) mul(f1cdf2, sqn[j], p, G[j]);

  Buf t1, t2, Ui, S, root, scratch;
  for (size_t i = 0; i < n; ++i) {
    mul(cn, sqd[i], p, t1);
    mul(f0cd, sqn[i], p, t2);
    sub(t1, t2, p, tmp);
    mul(tmp, cdf2, p, Ui);
    for (size_t j = 0; j < n; ++j) {
      mul(Ui, sqd[j], p, t1);
      mul(G[j], sqd[i], p, t2);
      sub(t1, t2, p, S);
      bool hit = false;
      if (S.len == 0) {
        hit = true;  // rhs vanished: x4 = 0
      } else if (S.deg() % 2 == 0 && sq_scalar[S.c[S.deg()]] &&
                 is_square_poly(S, p, sq_scalar, root, scratch)) {
        hit = true;
      }
      if (!hit) continue;
      // materialize and re-verify through exact arithmetic
      const RatFunc rhs =
          c - coeffs[0] * elems[i] * elems[i] - coeffs[1] * elems[j] * elems[j];
      auto x4sq = rhs / coeffs[2];
      auto x4 = x4sq.sqrt_exact();
      if (!x4) throw VerificationError("raw square test disagrees with exact arithmetic");
      std::array<RatFunc, 3> w = {elems[i], elems[j], *x4};
      if (w[0].is_zero() && w[1].is_zero() && w[2].is_zero()) continue;
      const RatFunc check =
          coeffs[0] * w[0] * w[0] + coeffs[1] * w[1] * w[1] + coeffs[2] * w[2] * w[2];
      if (!(check == c)) throw VerificationError("witness fails substitution re-check");
      return w;
    }
  }
  return std::nullopt;
}

}  // namespace diodef::detail
