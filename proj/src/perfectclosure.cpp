#include "diodef/perfectclosure.hpp"

#include <algorithm>

namespace diodef {

namespace {

std::uint64_t upow(std::uint64_t b, unsigned e) {
  std::uint64_t r = 1;
  for (unsigned i = 0; i < e; ++i) r *= b;
  return r;
}

// all exponents with nonzero coefficient divisible by p?
bool exponents_divisible(const Poly& f, std::uint32_t p) {
  for (int i = 0; i <= f.degree(); ++i)
    if (!f.coeff(i).is_zero() && i % p != 0) return false;
  return true;
}

Poly exponent_divide(const Poly& f, std::uint32_t p) {
  if (f.is_zero()) return f;
  std::vector<FFElem> cs;
  cs.reserve(f.degree() / p + 1);
  for (int i = 0; i <= f.degree(); i += p) cs.push_back(f.coeff(i));
  return Poly(f.field(), std::move(cs));
}

}  // namespace

// ---------------------------------------------------------------------------
// PerfElement
// ---------------------------------------------------------------------------

PerfElement PerfElement::make(unsigned level, RatFunc rep) {
  if (!rep.field()) throw ArgumentError("perfect-closure element needs a field");
  const std::uint32_t p = rep.field()->characteristic();
  while (level > 0 && exponents_divisible(rep.num(), p) && exponents_divisible(rep.den(), p)) {
    rep = RatFunc(exponent_divide(rep.num(), p), exponent_divide(rep.den(), p));
    --level;
  }
  PerfElement x;
  x.level_ = level;
  x.rep_ = std::move(rep);
  return x;
}

RatFunc PerfElement::rep_at_level(unsigned lvl) const {
  if (lvl < level_) throw ArgumentError("cannot view an element below its level");
  if (lvl == level_) return rep_;
  const std::uint64_t k = upow(rep_.field()->characteristic(), lvl - level_);
  return rep_.substitute_power(k);
}

PerfElement PerfElement::operator-() const { return make(level_, -rep_); }

namespace {

template <class Op>
PerfElement perf_binop(const PerfElement& x, const PerfElement& y, Op op) {
  const unsigned lvl = std::max(x.level(), y.level());
  return PerfElement::make(lvl, op(x.rep_at_level(lvl), y.rep_at_level(lvl)));
}

}  // namespace

PerfElement operator+(const PerfElement& x, const PerfElement& y) {
  return perf_binop(x, y, [](const RatFunc& a, const RatFunc& b) { return a + b; });
}
PerfElement operator-(const PerfElement& x, const PerfElement& y) {
  return perf_binop(x, y, [](const RatFunc& a, const RatFunc& b) { return a - b; });
}
PerfElement operator*(const PerfElement& x, const PerfElement& y) {
  return perf_binop(x, y, [](const RatFunc& a, const RatFunc& b) { return a * b; });
}
PerfElement operator/(const PerfElement& x, const PerfElement& y) {
  return perf_binop(x, y, [](const RatFunc& a, const RatFunc& b) { return a / b; });
}

bool operator==(const PerfElement& x, const PerfElement& y) {
  return x.level_ == y.level_ && x.rep_ == y.rep_;
}

bool is_zero(const PerfElement& x) { return x.is_zero(); }

PerfElement pth_root(const PerfElement& x) {
  return PerfElement::make(
      x.level() + 1,
      RatFunc(x.rep().num().frobenius_root_coeffs(1), x.rep().den().frobenius_root_coeffs(1)));
}

// ---------------------------------------------------------------------------
// PerfField
// ---------------------------------------------------------------------------

PerfField::PerfField(FFPtr constants) : base_(std::move(constants)) {}

Poly PerfField::place_poly_at_level(const PerfPlace& v, unsigned level) const {
  if (!v.base.is_finite())
    throw ArgumentError("places of the perfect closure extend finite places only");
  return v.base.pi.frobenius_root_coeffs(level);
}

std::optional<BigRational> PerfField::ord(const PerfPlace& v, const Elem& x) const {
  if (x.is_zero()) return std::nullopt;
  const Poly pil = place_poly_at_level(v, x.level());
  const FqtField::Place vl = FqtField::Place::finite(pil);
  const long n = *base_.ord(vl, x.rep());
  return make_rational(BigInt(n), BigInt(static_cast<unsigned long>(
                                       upow(base_.characteristic(), x.level()))));
}

bool PerfField::ord_at_least(const PerfPlace& v, const Elem& x, const BigRational& bound) const {
  const auto e = ord(v, x);
  return !e || *e >= bound;
}

bool PerfField::is_local_square(const PerfPlace& v, const Elem& x) const {
  if (x.is_zero()) throw ArgumentError("local square test on zero");
  if (base_.characteristic() == 2)
    throw ArgumentError("perfect-closure square classes require odd p");
  // The numerator parity of ord in Z[1/p] matches the parity of the ord of
  // the level representative (p odd), and the residue fields at every level
  // are canonically the same, so the base-field test at the element's level
  // answers the question in K_v.
  const FqtField::Place vl = FqtField::Place::finite(place_poly_at_level(v, x.level()));
  return base_.is_local_square(vl, x.rep());
}

FFElem PerfField::residue(const PerfPlace& v, const Elem& x) const {
  const unsigned lvl = x.level();
  const FqtField::Place vl = FqtField::Place::finite(place_poly_at_level(v, lvl));
  const FFElem raw = base_.residue(vl, x.rep());
  if (lvl == 0) return raw;
  // pull back through iota: c(t) mod pi  ->  c(s^(p^lvl)) mod pi_level
  const FFPtr k0 = base_.residue_field(v.base);
  const FFPtr kl = base_.residue_field(vl);
  const std::uint64_t sub = upow(base_.characteristic(), lvl);
  for (std::uint64_t idx = 0; idx < k0->order(); ++idx) {
    const FFElem c = k0->from_index(idx);
    // lift c to a polynomial in t, substitute t -> s^(p^lvl), reduce
    std::vector<FFElem> lift_coeffs;
    if (v.base.deg() == 1) {
      lift_coeffs = {c};
    } else {
      for (std::uint32_t ci : c.rep()) lift_coeffs.push_back(base_.constants()->from_int(ci));
    }
    const Poly lift(base_.constants(), std::move(lift_coeffs));
    const RatFunc image(lift.substitute_power(sub));
    if (base_.residue(vl, image) == raw) return c;
  }
  throw VerificationError("residue pullback failed; level identification broken");
}

std::pair<PerfElement, PerfElement> PerfField::split_at(const PerfPlace& v,
                                                        const Elem& x) const {
  const unsigned lvl = x.level();
  const FqtField::Place vl = FqtField::Place::finite(place_poly_at_level(v, lvl));
  auto [sing, rest] = base_.split_at(vl, x.rep_at_level(lvl));
  return {PerfElement::make(lvl, sing), PerfElement::make(lvl, rest)};
}

std::vector<PerfElement> PerfField::elements_up_to(unsigned maxlevel, long B) const {
  std::vector<PerfElement> out;
  for (unsigned lvl = 0; lvl <= maxlevel; ++lvl) {
    for (const auto& rep : base_.elements_of_height_at_most(B)) {
      PerfElement x = PerfElement::make(lvl, rep);
      if (x.level() == lvl) out.push_back(std::move(x));
    }
  }
  return out;
}

std::string PerfField::to_string(const Elem& x) const {
  if (x.level() == 0) return x.rep().to_string("t");
  return "level=" + std::to_string(x.level()) + "; " + x.rep().to_string("s");
}

PerfElement PerfField::parse(const std::string& text) const {
  const std::string prefix = "level=";
  if (text.rfind(prefix, 0) != 0) return PerfElement::from_base(base_.parse(text));
  const auto semi = text.find(';');
  if (semi == std::string::npos)
    throw ArgumentError("perfect-closure literal needs 'level=k; <element>'");
  const unsigned lvl =
      static_cast<unsigned>(std::stoul(text.substr(prefix.size(), semi - prefix.size())));
  const std::string body = text.substr(semi + 1);
  const std::string var = lvl == 0 ? "t" : "s";
  return PerfElement::make(lvl, parse_ratfunc(body, base_.constants(), var));
}

// ---------------------------------------------------------------------------
// Integral bases by lattice saturation
// ---------------------------------------------------------------------------

namespace {

struct OrderContext {
  const FqtField& K;
  FqtField::Place v1, v2;
  QuatAlgebra<RatFunc> alg;

  bool in_O(const RatFunc& x) const {
    return K.ord_at_least(v1, x, 0) && K.ord_at_least(v2, x, 0);
  }
  bool unit_in_O(const RatFunc& x) const {
    return !x.is_zero() && K.ord(v1, x) == 0 && K.ord(v2, x) == 0;
  }
  bool integral(const QuatElem<RatFunc>& z) const {
    return in_O(reduced_norm(alg, z)) && in_O(reduced_trace(alg, z));
  }
};

// Solve sum_i mu_i * basis_i = z for mu by Gaussian elimination over F_q(t).
std::array<RatFunc, 4> coords_in(const FqtField&,
                                 const std::array<QuatElem<RatFunc>, 4>& basis,
                                 const QuatElem<RatFunc>& z) {
  std::array<std::array<RatFunc, 5>, 4> m;
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) m[r][c] = basis[c].c[r];
    m[r][4] = z.c[r];
  }
  std::array<int, 4> where = {-1, -1, -1, -1};
  int row = 0;
  for (int col = 0; col < 4 && row < 4; ++col) {
    int pivot = -1;
    for (int r = row; r < 4; ++r)
      if (!m[r][col].is_zero()) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    std::swap(m[row], m[pivot]);
    const RatFunc inv = m[row][col].inv();
    for (int c = col; c < 5; ++c) m[row][c] = m[row][c] * inv;
    for (int r = 0; r < 4; ++r) {
      if (r == row || m[r][col].is_zero()) continue;
      const RatFunc f = m[r][col];
      for (int c = col; c < 5; ++c) m[r][c] = m[r][c] - f * m[row][c];
    }
    where[col] = row;
    ++row;
  }
  std::array<RatFunc, 4> mu;
  for (int col = 0; col < 4; ++col) {
    if (where[col] < 0) throw VerificationError("degenerate lattice basis");
    mu[col] = m[where[col]][4];
  }
  return mu;
}

RatFunc det4(const FqtField& K, const std::array<QuatElem<RatFunc>, 4>& basis) {
  // Laplace expansion on 4x4 of basis coordinates (columns = basis elements)
  std::array<std::array<RatFunc, 4>, 4> a;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) a[r][c] = basis[c].c[r];
  auto det3 = [&](int r0, int r1, int r2, int c0, int c1, int c2) {
    return a[r0][c0] * (a[r1][c1] * a[r2][c2] - a[r1][c2] * a[r2][c1]) -
           a[r0][c1] * (a[r1][c0] * a[r2][c2] - a[r1][c2] * a[r2][c0]) +
           a[r0][c2] * (a[r1][c0] * a[r2][c1] - a[r1][c1] * a[r2][c0]);
  };
  RatFunc d = K.zero();
  int sign = 1;
  for (int r = 0; r < 4; ++r) {
    const int rows[3] = {r == 0 ? 1 : 0, r <= 1 ? 2 : 1, r <= 2 ? 3 : 2};
    RatFunc term = a[r][0] * det3(rows[0], rows[1], rows[2], 1, 2, 3);
    d = sign > 0 ? d + term : d - term;
    sign = -sign;
  }
  return d;
}

// One saturation pass at the place v: find z = (sum lift(c_i) basis_i)/pi in
// the target set and swap it in (with a unit-adjusted lift so the swap keeps
// the O-span). Returns true if the lattice grew.
template <class Member>
bool saturate_once(const OrderContext& ctx, const FqtField::Place& v,
                   std::array<QuatElem<RatFunc>, 4>& basis, Member member) {
  const FqtField& K = ctx.K;
  const FqtField::Place& other = v == ctx.v1 ? ctx.v2 : ctx.v1;
  const auto digits = K.residue_system(v, 1);
  const RatFunc piv = K.uniformizer(v);
  std::array<size_t, 4> pick = {0, 0, 0, 0};
  while (true) {
    bool all_zero = true;
    for (size_t i = 0; i < 4; ++i)
      if (pick[i] != 0) all_zero = false;
    if (!all_zero) {
      QuatElem<RatFunc> acc = quat_scalar(ctx.alg, K.zero());
      for (size_t i = 0; i < 4; ++i)
        acc = quat_add(acc, quat_scale(basis[i], RatFunc(digits[pick[i]])));
      QuatElem<RatFunc> z = quat_scale(acc, K.one() / piv);
      if (member(z)) {
        // swap target: first index with nonzero digit, with a lift that is a
        // unit in O (congruent mod pi_v, unit at the other place)
        size_t u = 0;
        while (digits[pick[u]].is_zero()) ++u;
        const RatFunc adjusted = K.approximate(
            {FqtField::Target::congruent(v, RatFunc(digits[pick[u]]), 1),
             FqtField::Target::exact_ord(other, 0)});
        if (!ctx.unit_in_O(adjusted))
          throw VerificationError("adjusted lift is not a unit in O");
        QuatElem<RatFunc> acc2 = quat_scalar(ctx.alg, K.zero());
        for (size_t i = 0; i < 4; ++i) {
          const RatFunc c = i == u ? adjusted : RatFunc(digits[pick[i]]);
          acc2 = quat_add(acc2, quat_scale(basis[i], c));
        }
        QuatElem<RatFunc> z2 = quat_scale(acc2, K.one() / piv);
        if (!member(z2))
          throw VerificationError("unit-adjusted saturation candidate left the order");
        basis[u] = z2;
        return true;
      }
    }
    size_t i = 0;
    while (i < 4 && ++pick[i] == digits.size()) pick[i++] = 0;
    if (i == 4) return false;
  }
}

}  // namespace

IntegralBasis integral_basis(const FqtField& K, const FqtField::Place& v1,
                             const FqtField::Place& v2, const RatFunc& a_in,
                             const RatFunc& b_in) {
  if (!v1.is_finite() || !v2.is_finite() || v1 == v2)
    throw ArgumentError("integral bases need two distinct finite places");
  if (!K.odd_characteristic()) throw ArgumentError("integral bases need odd q");

  // square-rescale so that ord_v(a), ord_v(b) land in {0, 1} at both places
  auto normalize = [&](RatFunc x) {
    for (const auto& v : {v1, v2}) {
      const long e = *K.ord(v, x);
      const long target = ((e % 2) + 2) % 2;
      x = x * elem_pow(K, K.uniformizer(v), target - e);
    }
    return x;
  };
  const RatFunc a = normalize(a_in);
  const RatFunc b = normalize(b_in);

  {
    auto ram = ram_set(K, a, b);
    const bool exact = ram.ram.size() == 2 &&
                       ((ram.ram[0] == v1 && ram.ram[1] == v2) ||
                        (ram.ram[0] == v2 && ram.ram[1] == v1));
    if (!exact)
      throw ArgumentError("integral basis requires ram_set(a, b) = {v1, v2} exactly");
  }

  OrderContext ctx{K, v1, v2, QuatAlgebra<RatFunc>(a, b, QuatPresentation::OddChar)};

  std::array<QuatElem<RatFunc>, 4> basis = {
      quat_from_coords(ctx.alg, K.one(), K.zero(), K.zero(), K.zero()),
      quat_from_coords(ctx.alg, K.zero(), K.one(), K.zero(), K.zero()),
      quat_from_coords(ctx.alg, K.zero(), K.zero(), K.one(), K.zero()),
      quat_from_coords(ctx.alg, K.zero(), K.zero(), K.zero(), K.one())};
  for (const auto& e : basis)
    if (!ctx.integral(e)) throw VerificationError("standard order not integral after rescaling");

  // saturate O-span(basis) to the full O_D
  const int sat_cap = 8;
  int steps = 0;
  bool grew = true;
  while (grew) {
    grew = false;
    for (const auto& v : {v1, v2}) {
      while (saturate_once(ctx, v, basis,
                           [&](const QuatElem<RatFunc>& z) { return ctx.integral(z); })) {
        grew = true;
        if (++steps > sat_cap)
          throw SearchBoundError("order saturation exceeded the discriminant bound");
      }
    }
  }

  // trace normalization: lattice = O*1 (+) kernel(tr), kernel basis saturated
  const RatFunc two = K.from_int(2);
  std::array<QuatElem<RatFunc>, 4> proj;
  for (int i = 0; i < 4; ++i)
    proj[i] = quat_sub(basis[i],
                       quat_scalar(ctx.alg, reduced_trace(ctx.alg, basis[i]) / two));

  // pick three projections independent over the field
  std::array<QuatElem<RatFunc>, 3> kernel;
  {
    std::vector<QuatElem<RatFunc>> chosen;
    for (int i = 0; i < 4 && chosen.size() < 3; ++i) {
      std::vector<QuatElem<RatFunc>> trial = chosen;
      trial.push_back(proj[i]);
      // rank check by Gaussian elimination on the coordinate rows
      std::vector<std::array<RatFunc, 4>> rows;
      for (const auto& z : trial) rows.push_back(z.c);
      size_t rank = 0;
      for (int col = 0; col < 4 && rank < rows.size(); ++col) {
        size_t piv = rank;
        while (piv < rows.size() && rows[piv][col].is_zero()) ++piv;
        if (piv == rows.size()) continue;
        std::swap(rows[rank], rows[piv]);
        const RatFunc inv = rows[rank][col].inv();
        for (int c = 0; c < 4; ++c) rows[rank][c] = rows[rank][c] * inv;
        for (size_t r = 0; r < rows.size(); ++r) {
          if (r == rank || rows[r][col].is_zero()) continue;
          const RatFunc f = rows[r][col];
          for (int c = 0; c < 4; ++c) rows[r][c] = rows[r][c] - f * rows[rank][c];
        }
        ++rank;
      }
      if (rank == trial.size()) chosen = std::move(trial);
    }
    if (chosen.size() != 3) throw VerificationError("trace kernel is not of rank 3");
    std::copy(chosen.begin(), chosen.end(), kernel.begin());
  }

  // saturate the kernel triple inside the lattice: candidates must lie in
  // O-span(basis); their traces vanish automatically
  {
    auto in_lattice = [&](const QuatElem<RatFunc>& z) {
      for (const auto& mu : coords_in(K, basis, z))
        if (!ctx.in_O(mu)) return false;
      return true;
    };
    const int kcap = 8;
    int ksteps = 0;
    bool kgrew = true;
    while (kgrew) {
      kgrew = false;
      for (const auto& v : {v1, v2}) {
        const auto digits = K.residue_system(v, 1);
        const RatFunc piv = K.uniformizer(v);
        const FqtField::Place& other = v == v1 ? v2 : v1;
        std::array<size_t, 3> pick = {0, 0, 0};
        while (true) {
          bool all_zero = pick[0] == 0 && pick[1] == 0 && pick[2] == 0;
          if (!all_zero) {
            QuatElem<RatFunc> acc = quat_scalar(ctx.alg, K.zero());
            for (size_t i = 0; i < 3; ++i)
              acc = quat_add(acc, quat_scale(kernel[i], RatFunc(digits[pick[i]])));
            QuatElem<RatFunc> z = quat_scale(acc, K.one() / piv);
            if (in_lattice(z)) {
              size_t u = 0;
              while (digits[pick[u]].is_zero()) ++u;
              const RatFunc adjusted = K.approximate(
                  {FqtField::Target::congruent(v, RatFunc(digits[pick[u]]), 1),
                   FqtField::Target::exact_ord(other, 0)});
              QuatElem<RatFunc> acc2 = quat_scalar(ctx.alg, K.zero());
              for (size_t i = 0; i < 3; ++i) {
                const RatFunc c = i == u ? adjusted : RatFunc(digits[pick[i]]);
                acc2 = quat_add(acc2, quat_scale(kernel[i], c));
              }
              QuatElem<RatFunc> z2 = quat_scale(acc2, K.one() / piv);
              if (!in_lattice(z2))
                throw VerificationError("unit-adjusted kernel candidate left the lattice");
              kernel[u] = z2;
              kgrew = true;
              if (++ksteps > kcap)
                throw SearchBoundError("kernel saturation exceeded the discriminant bound");
              pick = {0, 0, 0};
              continue;
            }
          }
          size_t i = 0;
          while (i < 3 && ++pick[i] == digits.size()) pick[i++] = 0;
          if (i == 3) break;
        }
      }
    }
  }

  IntegralBasis out;
  out.a = a;
  out.b = b;
  out.basis = {quat_scalar(ctx.alg, K.one()), kernel[0], kernel[1], kernel[2]};

  // postcondition re-checks: traces, integrality, and span equality with the
  // saturated lattice
  if (!(reduced_trace(ctx.alg, out.basis[0]) == two))
    throw VerificationError("tr(1) != 2");
  for (int i = 1; i < 4; ++i)
    if (!reduced_trace(ctx.alg, out.basis[i]).is_zero())
      throw VerificationError("trace normalization failed");
  for (const auto& e : out.basis)
    if (!ctx.integral(e)) throw VerificationError("basis element not integral");
  for (const auto& e : basis) {
    for (const auto& mu : coords_in(K, out.basis, e))
      if (!ctx.in_O(mu))
        throw VerificationError("trace-normalized basis spans a smaller lattice");
  }
  for (const auto& e : out.basis) {
    for (const auto& mu : coords_in(K, basis, e))
      if (!ctx.in_O(mu))
        throw VerificationError("trace-normalized basis spans a larger lattice");
  }

  out.det = det4(K, out.basis);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      if (i == j) {
        out.gram[i][j] = reduced_norm(ctx.alg, out.basis[i]);
      } else {
        const RatFunc nij = reduced_norm(ctx.alg, quat_add(out.basis[i], out.basis[j]));
        out.gram[i][j] = (nij - reduced_norm(ctx.alg, out.basis[i]) -
                          reduced_norm(ctx.alg, out.basis[j])) /
                         two;
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Membership and the assembled definition
// ---------------------------------------------------------------------------

bool t_perf_membership(const PerfField& K, const FqtField::Place& target,
                       const PerfCopy& copy, const PerfElement& x1) {
  const PerfPlace p1{target}, p2{copy.helper};
  const BigRational zero_bound(0);
  if (!K.ord_at_least(p1, x1, zero_bound)) return false;
  if (!K.ord_at_least(p2, x1, zero_bound)) return false;
  if (x1 == K.one() || x1 == -K.one()) return true;
  const PerfElement d = x1 * x1 - K.one();
  if (d.is_zero()) return true;  // unreachable given the previous check
  return !K.is_local_square(p1, d) && !K.is_local_square(p2, d);
}

bool operf_membership(const PerfField& K, const FqtField::Place& target, const PerfCopy& copy,
                      const PerfElement& x, PerfCopyTrace* trace) {
  std::size_t tried = 0;
  for (std::size_t m = 0; m < copy.alphas.size(); ++m) {
    ++tried;
    if (t_perf_membership(K, target, copy, x - copy.alphas[m])) {
      if (trace) {
        trace->member = true;
        trace->shift_hit = m;
        trace->shifts_tried = tried;
      }
      return true;
    }
  }
  if (trace) {
    trace->member = false;
    trace->shift_hit.reset();
    trace->shifts_tried = tried;
  }
  return false;
}

std::size_t matched_shift_index(const PerfField& K, const FqtField::Place& target,
                                const PerfCopy& copy, const PerfElement& x) {
  const PerfPlace p1{target}, p2{copy.helper};
  const FFElem i = K.residue(p1, x) - copy.shift1;
  const FFElem j = K.residue(p2, x) - copy.shift2;
  return static_cast<std::size_t>(i.index() * copy.n2 + j.index());
}

PerfDecisionTrace decide_perf(const PerfField& K, const PerfIntegralityDefinition& def,
                              const PerfElement& x) {
  PerfDecisionTrace tr;
  auto [sing, rest] = K.split_at(PerfPlace{def.copies[1].helper}, x);
  tr.y = sing;
  tr.z = rest;
  const bool m0 = operf_membership(K, def.target, def.copies[0], tr.y, &tr.copy[0]);
  const bool m1 = operf_membership(K, def.target, def.copies[1], tr.z, &tr.copy[1]);
  tr.verdict = m0 && m1;
  return tr;
}

namespace {

RatFunc lift_residue(const FqtField& K, const FqtField::Place& v, const FFElem& c) {
  if (v.deg() == 1) return RatFunc(Poly::constant(c));
  std::vector<FFElem> coeffs;
  for (std::uint32_t ci : c.rep()) coeffs.push_back(K.constants()->from_int(ci));
  return RatFunc(Poly(K.constants(), std::move(coeffs)));
}

FormulaNode<PerfField> copy_formula(const PerfField& K, const PerfCopy& copy,
                                    const std::string& wvar, const std::string& prefix) {
  using P = FPoly<PerfField>;
  std::vector<FormulaNode<PerfField>> branches;
  for (std::size_t m = 0; m < copy.alphas.size(); ++m) {
    const std::string base = prefix + "_m" + std::to_string(m) + "_x";
    const std::vector<std::string> vars = {base + "2", base + "3", base + "4"};
    // X1 = w - alpha_m, X2..X4 fresh variables; equation: X^T G X = 1
    std::array<P, 4> X = {P::variable(K, wvar) - P::constant(K, copy.alphas[m]),
                          P::variable(K, vars[0]), P::variable(K, vars[1]),
                          P::variable(K, vars[2])};
    P qform;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        qform = qform + P::constant(K, K.from_base(copy.basis.gram[i][j])) * X[i] * X[j];
    branches.push_back(FormulaNode<PerfField>::exists(
        vars, FormulaNode<PerfField>::eq(qform - P::constant(K, K.one()))));
  }
  return FormulaNode<PerfField>::disj(std::move(branches));
}

}  // namespace

FormulaNode<PerfField> emit_perf_formula(const PerfField& K,
                                         const PerfIntegralityDefinition& def) {
  using P = FPoly<PerfField>;
  FormulaNode<PerfField> split =
      FormulaNode<PerfField>::eq(P::variable(K, "x") - P::variable(K, "y") -
                                 P::variable(K, "z"));
  FormulaNode<PerfField> m0 = copy_formula(K, def.copies[0], "y", "y");
  FormulaNode<PerfField> m1 = copy_formula(K, def.copies[1], "z", "z");
  return FormulaNode<PerfField>::exists(
      {"y", "z"},
      FormulaNode<PerfField>::conj({std::move(split), std::move(m0), std::move(m1)}));
}

PerfIntegralityDefinition build_perf_definition(const PerfField& K,
                                                const FqtField::Place& target,
                                                const SearchLimits& limits) {
  if (K.characteristic() <= 2)
    throw ArgumentError("the perfect-closure construction requires p > 2");
  if (!target.is_finite()) throw ArgumentError("target place must be finite");
  const FqtField& base = K.base_field();

  PerfIntegralityDefinition def{K, target, {}, {}};
  const FqtField::Place h1 = base.next_finite_place({target});
  const FqtField::Place h2 = base.next_finite_place({target, h1});

  for (int c = 0; c < 2; ++c) {
    PerfCopy copy;
    copy.helper = c == 0 ? h1 : h2;
    RamificationData<FqtField> alg = find_ramified_algebra(base, target, copy.helper, limits);
    copy.basis = integral_basis(base, target, copy.helper, alg.a, alg.b);
    copy.a = copy.basis.a;
    copy.b = copy.basis.b;

    const FFPtr k1 = base.residue_field(target);
    const FFPtr k2 = base.residue_field(copy.helper);
    copy.shift1 = find_nonsquare_shift(k1);
    copy.shift2 = find_nonsquare_shift(k2);
    copy.n1 = k1->order();
    copy.n2 = k2->order();
    if (copy.n1 * copy.n2 > limits.coset_cap)
      throw SearchBoundError("shift table of size " + std::to_string(copy.n1 * copy.n2) +
                             " exceeds the configured cap");

    copy.alphas.reserve(copy.n1 * copy.n2);
    for (std::uint64_t i = 0; i < copy.n1; ++i) {
      for (std::uint64_t j = 0; j < copy.n2; ++j) {
        const RatFunc li = lift_residue(base, target, k1->from_index(i));
        const RatFunc lj = lift_residue(base, copy.helper, k2->from_index(j));
        const RatFunc alpha = base.approximate(
            {FqtField::Target::congruent(target, li, 1),
             FqtField::Target::congruent(copy.helper, lj, 1)});
        copy.alphas.push_back(PerfElement::from_base(alpha));
      }
    }

    // the shift element with nonsquare-shift residues at both places lies in T
    const std::size_t a_idx =
        static_cast<std::size_t>(copy.shift1.index() * copy.n2 + copy.shift2.index());
    if (!t_perf_membership(K, target, copy, copy.alphas[a_idx]))
      throw VerificationError("nonsquare-shift element fails its T membership");

    def.copies[c] = std::move(copy);
  }
  def.formula = emit_perf_formula(K, def);
  return def;
}

}  // namespace diodef
