#include "diodef/exactalg.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

namespace diodef {

namespace {

// --- raw polynomial arithmetic over F_p on coefficient vectors -------------

using Vec = std::vector<std::uint32_t>;

void vtrim(Vec& v) {
  while (!v.empty() && v.back() == 0) v.pop_back();
}

int vdeg(const Vec& v) { return static_cast<int>(v.size()) - 1; }

Vec vadd(const Vec& a, const Vec& b, std::uint32_t p) {
  Vec r(std::max(a.size(), b.size()), 0);
  for (size_t i = 0; i < r.size(); ++i) {
    std::uint64_t s = 0;
    if (i < a.size()) s += a[i];
    if (i < b.size()) s += b[i];
    r[i] = static_cast<std::uint32_t>(s % p);
  }
  vtrim(r);
  return r;
}

Vec vneg(const Vec& a, std::uint32_t p) {
  Vec r(a);
  for (auto& c : r) c = c == 0 ? 0 : p - c;
  return r;
}

Vec vsub(const Vec& a, const Vec& b, std::uint32_t p) { return vadd(a, vneg(b, p), p); }

Vec vmul(const Vec& a, const Vec& b, std::uint32_t p) {
  if (a.empty() || b.empty()) return {};
  Vec r(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size(); ++j) {
      r[i + j] = static_cast<std::uint32_t>(
          (r[i + j] + static_cast<std::uint64_t>(a[i]) * b[j]) % p);
    }
  }
  vtrim(r);
  return r;
}

std::uint32_t sc_inv(std::uint32_t a, std::uint32_t p) {
  // extended Euclid on scalars
  std::int64_t t = 0, nt = 1, r = p, nr = a % p;
  while (nr != 0) {
    std::int64_t q = r / nr;
    std::swap(t -= q * nt, nt);
    std::swap(r -= q * nr, nr);
  }
  if (r != 1) throw ArgumentError("scalar not invertible mod p");
  return static_cast<std::uint32_t>(t < 0 ? t + p : t);
}

// returns (quot, rem)
std::pair<Vec, Vec> vdivmod(Vec a, const Vec& b, std::uint32_t p) {
  if (b.empty()) throw ArgumentError("division by zero polynomial");
  Vec q;
  const std::uint32_t binv = sc_inv(b.back(), p);
  while (vdeg(a) >= vdeg(b)) {
    const int shift = vdeg(a) - vdeg(b);
    const std::uint32_t c =
        static_cast<std::uint32_t>(static_cast<std::uint64_t>(a.back()) * binv % p);
    if (static_cast<int>(q.size()) < shift + 1) q.resize(shift + 1, 0);
    q[shift] = c;
    for (size_t i = 0; i < b.size(); ++i) {
      const size_t k = i + shift;
      const std::uint64_t sub = static_cast<std::uint64_t>(c) * b[i] % p;
      a[k] = static_cast<std::uint32_t>((a[k] + p - sub) % p);
    }
    vtrim(a);
  }
  vtrim(q);
  return {q, a};
}

Vec vmod(const Vec& a, const Vec& b, std::uint32_t p) { return vdivmod(a, b, p).second; }

// Irreducibility over F_p by trial division up to degree m/2; desk scale.
bool virreducible(const Vec& f, std::uint32_t p) {
  const int m = vdeg(f);
  if (m <= 0) return false;
  if (m == 1) return true;
  const int half = m / 2;
  // iterate monic polynomials g of degree d = 1..half in counting order
  for (int d = 1; d <= half; ++d) {
    std::uint64_t count = 1;
    for (int i = 0; i < d; ++i) {
      count *= p;
      if (count > 2'000'000) throw SearchBoundError("modulus irreducibility test beyond desk scale");
    }
    for (std::uint64_t idx = 0; idx < count; ++idx) {
      Vec g(d + 1, 0);
      std::uint64_t v = idx;
      for (int i = 0; i < d; ++i) {
        g[i] = static_cast<std::uint32_t>(v % p);
        v /= p;
      }
      g[d] = 1;
      if (vmod(f, g, p).empty()) return false;
    }
  }
  return true;
}

std::uint64_t checked_pow(std::uint64_t base, unsigned e) {
  std::uint64_t r = 1;
  for (unsigned i = 0; i < e; ++i) {
    if (r > (std::uint64_t{1} << 62) / base) throw ArgumentError("field order overflow");
    r *= base;
  }
  return r;
}

bool small_prime(std::uint32_t p) {
  if (p < 2) return false;
  for (std::uint32_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

void require_same_field(const FFElem& x, const FFElem& y) {
  if (!x.field() || !y.field()) throw ArgumentError("arithmetic on detached field element");
  if (!x.field()->same_as(*y.field())) throw ArgumentError("mixed-field operands");
}

}  // namespace

// --- FFElem -----------------------------------------------------------------

FFElem::FFElem(FFPtr field, std::vector<std::uint32_t> rep)
    : field_(std::move(field)), rep_(std::move(rep)) {}

std::uint64_t FFElem::index() const {
  std::uint64_t idx = 0;
  const std::uint64_t p = field_ ? field_->characteristic() : 0;
  for (size_t i = rep_.size(); i-- > 0;) idx = idx * p + rep_[i];
  return idx;
}

FFElem FFElem::operator-() const {
  if (!field_) throw ArgumentError("arithmetic on detached field element");
  return FFElem(field_, vneg(rep_, field_->characteristic()));
}

FFElem operator+(const FFElem& x, const FFElem& y) {
  require_same_field(x, y);
  return FFElem(x.field_, vadd(x.rep_, y.rep_, x.field_->characteristic()));
}

FFElem operator-(const FFElem& x, const FFElem& y) {
  require_same_field(x, y);
  return FFElem(x.field_, vsub(x.rep_, y.rep_, x.field_->characteristic()));
}

FFElem operator*(const FFElem& x, const FFElem& y) {
  require_same_field(x, y);
  const std::uint32_t p = x.field_->characteristic();
  return FFElem(x.field_, vmod(vmul(x.rep_, y.rep_, p), x.field_->modulus(), p));
}

FFElem operator/(const FFElem& x, const FFElem& y) { return x * y.inv(); }

FFElem FFElem::inv() const {
  if (!field_) throw ArgumentError("arithmetic on detached field element");
  if (is_zero()) throw ArgumentError("inversion of zero field element");
  const std::uint32_t p = field_->characteristic();
  // extended Euclid: s*rep + t*modulus = gcd = const
  Vec r0 = field_->modulus(), r1 = rep_;
  Vec s0 = {}, s1 = {1};
  while (!r1.empty()) {
    auto [q, r2] = vdivmod(r0, r1, p);
    Vec s2 = vsub(s0, vmul(q, s1, p), p);
    r0 = std::move(r1);
    r1 = std::move(r2);
    s0 = std::move(s1);
    s1 = std::move(s2);
  }
  if (vdeg(r0) != 0) throw VerificationError("gcd with irreducible modulus not constant");
  const std::uint32_t c = sc_inv(r0[0], p);
  for (auto& v : s0) v = static_cast<std::uint32_t>(static_cast<std::uint64_t>(v) * c % p);
  vtrim(s0);
  return FFElem(field_, std::move(s0));
}

FFElem FFElem::pow(std::uint64_t e) const {
  if (!field_) throw ArgumentError("arithmetic on detached field element");
  FFElem acc = field_->one();
  FFElem base = *this;
  while (e > 0) {
    if (e & 1) acc = acc * base;
    base = base * base;
    e >>= 1;
  }
  return acc;
}

bool operator==(const FFElem& x, const FFElem& y) {
  require_same_field(x, y);
  return x.rep_ == y.rep_;
}

std::string FFElem::to_string(const std::string& var) const {
  if (rep_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (size_t i = rep_.size(); i-- > 0;) {
    if (rep_[i] == 0) continue;
    if (!first) os << "+";
    first = false;
    if (i == 0) {
      os << rep_[i];
    } else {
      if (rep_[i] != 1) os << rep_[i] << "*";
      os << var;
      if (i > 1) os << "^" << i;
    }
  }
  return os.str();
}

// --- FiniteField ------------------------------------------------------------

FiniteField::FiniteField(std::uint32_t p, std::vector<std::uint32_t> modulus)
    : p_(p), m_(static_cast<unsigned>(modulus.size() - 1)), modulus_(std::move(modulus)) {
  order_ = checked_pow(p_, m_);
}

FFPtr FiniteField::prime_field(std::uint32_t p) {
  if (!small_prime(p)) throw ArgumentError("characteristic must be prime");
  // modulus u - 0: elements are the constants
  return FFPtr(new FiniteField(p, {0, 1}));
}

FFPtr FiniteField::with_modulus(std::uint32_t p, std::vector<std::uint32_t> modulus) {
  if (!small_prime(p)) throw ArgumentError("characteristic must be prime");
  for (auto& c : modulus) c %= p;
  vtrim(modulus);
  if (vdeg(modulus) < 1) throw ArgumentError("modulus must have degree >= 1");
  if (modulus.back() != 1) throw ArgumentError("modulus must be monic");
  if (vdeg(modulus) > 1 && !virreducible(modulus, p))
    throw ArgumentError("modulus is reducible over F_p");
  return FFPtr(new FiniteField(p, std::move(modulus)));
}

FFPtr FiniteField::with_degree(std::uint32_t p, unsigned m) {
  if (!small_prime(p)) throw ArgumentError("characteristic must be prime");
  if (m == 0) throw ArgumentError("degree must be positive");
  if (m == 1) return prime_field(p);
  const std::uint64_t count = checked_pow(p, m);
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    Vec f(m + 1, 0);
    std::uint64_t v = idx;
    for (unsigned i = 0; i < m; ++i) {
      f[i] = static_cast<std::uint32_t>(v % p);
      v /= p;
    }
    f[m] = 1;
    if (virreducible(f, p)) return FFPtr(new FiniteField(p, std::move(f)));
  }
  throw VerificationError("no irreducible modulus found");  // unreachable
}

FFPtr FiniteField::with_order(std::uint64_t q) {
  for (std::uint32_t p = 2; static_cast<std::uint64_t>(p) * p <= q || p <= q; ++p) {
    if (!small_prime(p)) continue;
    if (q % p == 0) {
      unsigned m = 0;
      std::uint64_t r = q;
      while (r % p == 0) {
        r /= p;
        ++m;
      }
      if (r != 1) throw ArgumentError("field order is not a prime power");
      return with_degree(p, m);
    }
  }
  throw ArgumentError("field order is not a prime power");
}

FFElem FiniteField::zero() const { return FFElem(shared_from_this(), {}); }

FFElem FiniteField::one() const { return FFElem(shared_from_this(), {1}); }

FFElem FiniteField::from_int(std::int64_t v) const {
  std::int64_t r = v % static_cast<std::int64_t>(p_);
  if (r < 0) r += p_;
  if (r == 0) return zero();
  return FFElem(shared_from_this(), {static_cast<std::uint32_t>(r)});
}

FFElem FiniteField::element(std::vector<std::uint32_t> coeffs) const {
  for (auto& c : coeffs) c %= p_;
  vtrim(coeffs);
  if (vdeg(coeffs) >= static_cast<int>(m_)) coeffs = vmod(coeffs, modulus_, p_);
  return FFElem(shared_from_this(), std::move(coeffs));
}

FFElem FiniteField::from_index(std::uint64_t idx) const {
  Vec rep;
  while (idx > 0) {
    rep.push_back(static_cast<std::uint32_t>(idx % p_));
    idx /= p_;
  }
  if (vdeg(rep) >= static_cast<int>(m_)) throw ArgumentError("element index out of range");
  return FFElem(shared_from_this(), std::move(rep));
}

std::vector<FFElem> FiniteField::all_elements() const {
  std::vector<FFElem> out;
  out.reserve(order_);
  for (std::uint64_t i = 0; i < order_; ++i) out.push_back(from_index(i));
  return out;
}

FFElem FiniteField::generator() const {
  if (m_ == 1) return zero();
  return FFElem(shared_from_this(), {0, 1});
}

// --- field-level helpers ------------------------------------------------------

int quadratic_character(const FFElem& u) {
  if (!u.field()) throw ArgumentError("quadratic character of detached element");
  if (u.field()->characteristic() == 2)
    throw ArgumentError("quadratic character undefined in characteristic 2");
  if (u.is_zero()) return 0;
  const FFElem v = u.pow((u.field()->order() - 1) / 2);
  if (v.is_one()) return 1;
  if ((-v).is_one()) return -1;
  throw VerificationError("quadratic character not in {1,-1}");
}

FFElem find_nonsquare(const FFPtr& field) {
  for (std::uint64_t i = 0; i < field->order(); ++i) {
    FFElem a = field->from_index(i);
    if (quadratic_character(a) == -1) return a;
  }
  throw VerificationError("no nonsquare in finite field of odd order > 1");
}

FFElem find_nonsquare_shift(const FFPtr& field) {
  for (std::uint64_t i = 0; i < field->order(); ++i) {
    FFElem a = field->from_index(i);
    if (quadratic_character(a * a - field->one()) == -1) return a;
  }
  throw VerificationError("no nonsquare shift found; contradicts the square count");
}

FFElem inverse_frobenius(const FFElem& x) {
  if (!x.field()) throw ArgumentError("inverse Frobenius of detached element");
  const auto& F = *x.field();
  // x^(p^(m-1)) since x^(p^m) = x
  std::uint64_t e = 1;
  for (unsigned i = 0; i + 1 < F.degree(); ++i) e *= F.characteristic();
  return x.pow(e);
}

std::optional<FFElem> ff_sqrt(const FFElem& x) {
  if (!x.field()) throw ArgumentError("sqrt of detached element");
  if (x.is_zero()) return x;
  if (x.field()->characteristic() == 2) {
    // squaring is bijective
    std::uint64_t e = 1;
    for (unsigned i = 0; i + 1 < x.field()->degree(); ++i) e *= 2;
    return x.pow(e);
  }
  if (quadratic_character(x) != 1) return std::nullopt;
  for (std::uint64_t i = 0; i < x.field()->order(); ++i) {
    FFElem c = x.field()->from_index(i);
    if (c * c == x) return c;
  }
  return std::nullopt;
}

// --- Poly --------------------------------------------------------------------

Poly::Poly(FFPtr field) : field_(std::move(field)) {}

Poly::Poly(FFPtr field, std::vector<FFElem> coeffs)
    : field_(std::move(field)), coeffs_(std::move(coeffs)) {
  for (const auto& c : coeffs_)
    if (!c.field() || !c.field()->same_as(*field_))
      throw ArgumentError("polynomial coefficient from a different field");
  trim();
}

Poly Poly::constant(const FFElem& c) {
  Poly f(c.field());
  if (!c.is_zero()) f.coeffs_ = {c};
  return f;
}

Poly Poly::variable(FFPtr field) {
  Poly f(field);
  f.coeffs_ = {field->zero(), field->one()};
  return f;
}

Poly Poly::from_int_coeffs(FFPtr field, std::vector<std::int64_t> coeffs) {
  std::vector<FFElem> cs;
  cs.reserve(coeffs.size());
  for (auto v : coeffs) cs.push_back(field->from_int(v));
  return Poly(field, std::move(cs));
}

void Poly::trim() {
  while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
}

bool Poly::is_one() const { return coeffs_.size() == 1 && coeffs_[0].is_one(); }

bool Poly::is_monic() const { return !coeffs_.empty() && coeffs_.back().is_one(); }

FFElem Poly::leading_coeff() const {
  if (coeffs_.empty()) return field_->zero();
  return coeffs_.back();
}

FFElem Poly::coeff(unsigned i) const {
  if (i >= coeffs_.size()) return field_->zero();
  return coeffs_[i];
}

Poly Poly::operator-() const {
  Poly r(field_);
  r.coeffs_.reserve(coeffs_.size());
  for (const auto& c : coeffs_) r.coeffs_.push_back(-c);
  return r;
}

Poly operator+(const Poly& f, const Poly& g) {
  Poly r(f.field_);
  const size_t n = std::max(f.coeffs_.size(), g.coeffs_.size());
  r.coeffs_.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    FFElem c = i < f.coeffs_.size()
                   ? (i < g.coeffs_.size() ? f.coeffs_[i] + g.coeffs_[i] : f.coeffs_[i])
                   : g.coeffs_[i];
    r.coeffs_.push_back(std::move(c));
  }
  r.trim();
  return r;
}

Poly operator-(const Poly& f, const Poly& g) { return f + (-g); }

Poly operator*(const Poly& f, const Poly& g) {
  Poly r(f.field_);
  if (f.is_zero() || g.is_zero()) return r;
  r.coeffs_.assign(f.coeffs_.size() + g.coeffs_.size() - 1, f.field_->zero());
  for (size_t i = 0; i < f.coeffs_.size(); ++i) {
    if (f.coeffs_[i].is_zero()) continue;
    for (size_t j = 0; j < g.coeffs_.size(); ++j)
      r.coeffs_[i + j] = r.coeffs_[i + j] + f.coeffs_[i] * g.coeffs_[j];
  }
  r.trim();
  return r;
}

Poly Poly::scaled(const FFElem& c) const {
  Poly r(field_);
  if (c.is_zero()) return r;
  r.coeffs_.reserve(coeffs_.size());
  for (const auto& a : coeffs_) r.coeffs_.push_back(a * c);
  r.trim();
  return r;
}

Poly Poly::monic() const {
  if (is_zero() || is_monic()) return *this;
  return scaled(leading_coeff().inv());
}

bool operator==(const Poly& f, const Poly& g) {
  if (f.coeffs_.size() != g.coeffs_.size()) return false;
  for (size_t i = 0; i < f.coeffs_.size(); ++i)
    if (!(f.coeffs_[i] == g.coeffs_[i])) return false;
  return true;
}

bool poly_less(const Poly& f, const Poly& g) {
  if (f.degree() != g.degree()) return f.degree() < g.degree();
  for (size_t i = f.coeffs_.size(); i-- > 0;) {
    const std::uint64_t a = f.coeffs_[i].index(), b = g.coeffs_[i].index();
    if (a != b) return a < b;
  }
  return false;
}

std::pair<Poly, Poly> Poly::divmod(const Poly& f, const Poly& g) {
  if (g.is_zero()) throw ArgumentError("polynomial division by zero");
  Poly q(f.field_), r = f;
  const FFElem lg = g.leading_coeff().inv();
  while (r.degree() >= g.degree()) {
    const int shift = r.degree() - g.degree();
    const FFElem c = r.leading_coeff() * lg;
    Poly term(f.field_);
    term.coeffs_.assign(shift + 1, f.field_->zero());
    term.coeffs_[shift] = c;
    q = q + term;
    r = r - term * g;
  }
  return {q, r};
}

Poly operator%(const Poly& f, const Poly& g) { return Poly::divmod(f, g).second; }

bool Poly::divides(const Poly& f) const { return (f % *this).is_zero(); }

FFElem Poly::eval(const FFElem& x) const {
  FFElem acc = field_->zero();
  for (size_t i = coeffs_.size(); i-- > 0;) acc = acc * x + coeffs_[i];
  return acc;
}

Poly Poly::derivative() const {
  Poly r(field_);
  for (size_t i = 1; i < coeffs_.size(); ++i)
    r.coeffs_.push_back(coeffs_[i] * field_->from_int(static_cast<std::int64_t>(i)));
  r.trim();
  return r;
}

Poly Poly::pow(std::uint64_t e) const {
  Poly acc = Poly::constant(field_->one());
  Poly base = *this;
  while (e > 0) {
    if (e & 1) acc = acc * base;
    base = base * base;
    e >>= 1;
  }
  return acc;
}

Poly Poly::pow_mod(std::uint64_t e, const Poly& mod) const {
  Poly acc = Poly::constant(field_->one()) % mod;
  Poly base = *this % mod;
  while (e > 0) {
    if (e & 1) acc = (acc * base) % mod;
    base = (base * base) % mod;
    e >>= 1;
  }
  return acc;
}

Poly Poly::substitute_power(std::uint64_t k) const {
  if (k == 0) throw ArgumentError("substitute_power requires k >= 1");
  Poly r(field_);
  if (is_zero()) return r;
  r.coeffs_.assign((coeffs_.size() - 1) * k + 1, field_->zero());
  for (size_t i = 0; i < coeffs_.size(); ++i) r.coeffs_[i * k] = coeffs_[i];
  return r;
}

Poly Poly::frobenius_root_coeffs(unsigned times) const {
  Poly r = *this;
  for (auto& c : r.coeffs_)
    for (unsigned i = 0; i < times; ++i) c = inverse_frobenius(c);
  return r;
}

bool Poly::is_irreducible() const {
  const int n = degree();
  if (n <= 0) return false;
  if (n == 1) return true;
  if (n <= 3) {
    // degree 2 or 3: irreducible iff no root
    for (std::uint64_t i = 0; i < field_->order(); ++i)
      if (eval(field_->from_index(i)).is_zero()) return false;
    return true;
  }
  // Rabin: x^(q^n) = x mod f, and gcd(x^(q^(n/r)) - x, f) = 1 for prime r | n.
  const Poly x = Poly::variable(field_);
  auto frob_iterate = [&](unsigned k) {
    Poly h = x % *this;
    for (unsigned i = 0; i < k; ++i) h = h.pow_mod(field_->order(), *this);
    return h;
  };
  if (!(frob_iterate(n) - x % *this).is_zero()) return false;
  for (int r = 2; r <= n; ++r) {
    if (n % r != 0) continue;
    bool rprime = true;
    for (int d = 2; d * d <= r; ++d)
      if (r % d == 0) rprime = false;
    if (!rprime) continue;
    Poly g = poly_gcd(frob_iterate(n / r) - x, *this);
    if (!g.is_one()) return false;
  }
  return true;
}

std::optional<Poly> Poly::sqrt_exact() const {
  if (is_zero()) return *this;
  if (degree() % 2 != 0) return std::nullopt;
  const auto lc = ff_sqrt(leading_coeff());
  if (!lc) return std::nullopt;
  const int m = degree() / 2;
  Poly g(field_);
  g.coeffs_.assign(m + 1, field_->zero());
  g.coeffs_[m] = *lc;
  if (field_->characteristic() == 2) {
    // g is obtained coefficient-by-coefficient: only even exponents may occur
    for (int i = 0; i < degree(); ++i)
      if (i % 2 == 1 && !coeff(i).is_zero()) return std::nullopt;
    for (int i = 0; i <= m; ++i) {
      auto c = ff_sqrt(coeff(2 * i));
      if (!c) return std::nullopt;
      g.coeffs_[i] = *c;
    }
    g.trim();
    return (g * g == *this) ? std::optional<Poly>(g) : std::nullopt;
  }
  const FFElem two_lc_inv = (*lc + *lc).inv();
  for (int i = m - 1; i >= 0; --i) {
    const Poly diff = *this - g * g;
    g.coeffs_[i] = diff.coeff(m + i) * two_lc_inv;
  }
  g.trim();
  if (g * g == *this) return g;
  return std::nullopt;
}

std::string Poly::to_string(const std::string& var) const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  const bool prime = field_->degree() == 1;
  for (size_t i = coeffs_.size(); i-- > 0;) {
    const FFElem& c = coeffs_[i];
    if (c.is_zero()) continue;
    if (!first) os << "+";
    first = false;
    std::string cs = prime ? std::to_string(c.index()) : "(" + c.to_string("u") + ")";
    if (i == 0) {
      os << cs;
      continue;
    }
    if (!(c.is_one())) os << cs << "*";
    os << var;
    if (i > 1) os << "^" << i;
  }
  return os.str();
}

Poly poly_gcd(Poly f, Poly g) {
  while (!g.is_zero()) {
    Poly r = f % g;
    f = std::move(g);
    g = std::move(r);
  }
  return f.monic();
}

std::vector<Poly> monic_irreducibles(const FFPtr& field, unsigned degree) {
  std::vector<Poly> out;
  std::uint64_t count = 1;
  for (unsigned i = 0; i < degree; ++i) count *= field->order();
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    std::vector<FFElem> cs;
    cs.reserve(degree + 1);
    std::uint64_t v = idx;
    for (unsigned i = 0; i < degree; ++i) {
      cs.push_back(field->from_index(v % field->order()));
      v /= field->order();
    }
    cs.push_back(field->one());
    Poly f(field, std::move(cs));
    if (f.is_irreducible()) out.push_back(std::move(f));
  }
  return out;
}

Poly poly_crt(const std::vector<Poly>& residues, const std::vector<Poly>& moduli) {
  if (residues.size() != moduli.size() || moduli.empty())
    throw ArgumentError("CRT needs matching nonempty residue/modulus lists");
  for (size_t i = 0; i < moduli.size(); ++i)
    for (size_t j = i + 1; j < moduli.size(); ++j)
      if (!poly_gcd(moduli[i], moduli[j]).is_one())
        throw ArgumentError("CRT moduli are not pairwise coprime");
  const FFPtr field = moduli[0].field();
  Poly M = Poly::constant(field->one());
  for (const auto& m : moduli) M = M * m;
  Poly x(field);
  for (size_t i = 0; i < moduli.size(); ++i) {
    const Poly Mi = Poly::divmod(M, moduli[i]).first;
    // invert Mi mod moduli[i] via extended Euclid
    Poly r0 = moduli[i], r1 = Mi % moduli[i];
    Poly s0(field), s1 = Poly::constant(field->one());
    while (!r1.is_zero()) {
      auto [q, r2] = Poly::divmod(r0, r1);
      Poly s2 = s0 - q * s1;
      r0 = std::move(r1);
      r1 = std::move(r2);
      s0 = std::move(s1);
      s1 = std::move(s2);
    }
    if (r0.degree() != 0) throw ArgumentError("CRT moduli are not pairwise coprime");
    const Poly inv = s0.scaled(r0.coeff(0).inv());
    x = x + residues[i] * Mi * inv;
  }
  return x % M;
}

std::optional<long> poly_ord(const Poly& f, const Poly& pi) {
  if (f.is_zero()) return std::nullopt;
  long n = 0;
  Poly g = f;
  while (true) {
    auto [q, r] = Poly::divmod(g, pi);
    if (!r.is_zero()) return n;
    g = std::move(q);
    ++n;
  }
}

std::pair<FFElem, std::vector<std::pair<Poly, int>>> poly_factor(const Poly& f) {
  if (f.is_zero()) throw ArgumentError("factorization of the zero polynomial");
  std::vector<std::pair<Poly, int>> factors;
  Poly g = f.monic();
  // trial division by monic irreducibles in counting order; after removing all
  // factors of degree <= deg/2 the cofactor is irreducible
  unsigned d = 1;
  while (g.degree() > 0) {
    if (static_cast<int>(d) > g.degree() / 2) {
      factors.emplace_back(g, 1);
      break;
    }
    for (const auto& pi : monic_irreducibles(f.field(), d)) {
      int mult = 0;
      while (pi.divides(g)) {
        g = Poly::divmod(g, pi).first;
        ++mult;
      }
      if (mult > 0) factors.emplace_back(pi, mult);
      if (g.degree() == 0) break;
    }
    ++d;
  }
  std::sort(factors.begin(), factors.end(),
            [](const auto& a, const auto& b) { return poly_less(a.first, b.first); });
  return {f.leading_coeff(), std::move(factors)};
}

// --- RatFunc -----------------------------------------------------------------

RatFunc::RatFunc(Poly num) : num_(std::move(num)), den_(Poly::constant(num_.field()->one())) {}

RatFunc::RatFunc(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw ArgumentError("rational function with zero denominator");
  canonicalize();
}

RatFunc RatFunc::one(FFPtr field) { return RatFunc(Poly::constant(field->one())); }

RatFunc RatFunc::from_int(FFPtr field, std::int64_t v) {
  return RatFunc(Poly::constant(field->from_int(v)));
}

void RatFunc::canonicalize() {
  if (num_.is_zero()) {
    den_ = Poly::constant(num_.field()->one());
    return;
  }
  const Poly g = poly_gcd(num_, den_);
  if (!g.is_one()) {
    num_ = Poly::divmod(num_, g).first;
    den_ = Poly::divmod(den_, g).first;
  }
  const FFElem lc = den_.leading_coeff();
  if (!lc.is_one()) {
    const FFElem inv = lc.inv();
    num_ = num_.scaled(inv);
    den_ = den_.scaled(inv);
  }
}

RatFunc RatFunc::operator-() const {
  RatFunc r = *this;
  r.num_ = -r.num_;
  return r;
}

RatFunc operator+(const RatFunc& x, const RatFunc& y) {
  return RatFunc(x.num_ * y.den_ + y.num_ * x.den_, x.den_ * y.den_);
}

RatFunc operator-(const RatFunc& x, const RatFunc& y) { return x + (-y); }

RatFunc operator*(const RatFunc& x, const RatFunc& y) {
  return RatFunc(x.num_ * y.num_, x.den_ * y.den_);
}

RatFunc operator/(const RatFunc& x, const RatFunc& y) {
  if (y.is_zero()) throw ArgumentError("division by zero rational function");
  return RatFunc(x.num_ * y.den_, x.den_ * y.num_);
}

RatFunc RatFunc::inv() const {
  if (is_zero()) throw ArgumentError("inversion of zero rational function");
  return RatFunc(den_, num_);
}

RatFunc RatFunc::pow(std::int64_t e) const {
  if (e < 0) return inv().pow(-e);
  RatFunc acc = RatFunc::one(field());
  RatFunc base = *this;
  std::uint64_t k = static_cast<std::uint64_t>(e);
  while (k > 0) {
    if (k & 1) acc = acc * base;
    base = base * base;
    k >>= 1;
  }
  return acc;
}

RatFunc RatFunc::substitute_power(std::uint64_t k) const {
  return RatFunc(num_.substitute_power(k), den_.substitute_power(k));
}

bool operator==(const RatFunc& x, const RatFunc& y) {
  return x.num_ == y.num_ && x.den_ == y.den_;
}

long RatFunc::height() const {
  return std::max({num_.degree(), den_.degree(), 0});
}

std::optional<RatFunc> RatFunc::sqrt_exact() const {
  if (is_zero()) return *this;
  // canonical form: a square iff num and den are squares up to the same unit
  const FFElem lc = num_.leading_coeff();
  auto dn = den_.sqrt_exact();
  if (!dn) return std::nullopt;
  auto nm = num_.scaled(lc.inv()).sqrt_exact();
  if (!nm) return std::nullopt;
  auto sc = ff_sqrt(lc);
  if (!sc) return std::nullopt;
  return RatFunc(nm->scaled(*sc), *dn);
}

std::string RatFunc::to_string(const std::string& var) const {
  if (is_polynomial()) return num_.to_string(var);
  return "(" + num_.to_string(var) + ")/(" + den_.to_string(var) + ")";
}

bool is_zero(const RatFunc& x) { return x.is_zero(); }

// --- BigRational helpers -------------------------------------------------------

BigRational make_rational(const BigInt& num, const BigInt& den) {
  if (den == 0) throw ArgumentError("rational with zero denominator");
  BigRational q(num, den);
  q.canonicalize();
  return q;
}

bool is_zero(const BigRational& x) { return sgn(x) == 0; }

std::optional<long> rational_ord(const BigRational& x, const BigInt& ell) {
  if (sgn(x) == 0) return std::nullopt;
  mpz_class tmp;
  const long vn = static_cast<long>(
      mpz_remove(tmp.get_mpz_t(), x.get_num().get_mpz_t(), ell.get_mpz_t()));
  const long vd = static_cast<long>(
      mpz_remove(tmp.get_mpz_t(), x.get_den().get_mpz_t(), ell.get_mpz_t()));
  return vn - vd;
}

BigInt rational_height(const BigRational& x) {
  BigInt n = abs(BigInt(x.get_num()));
  BigInt d = x.get_den();
  return n > d ? n : d;
}

std::optional<BigRational> rational_sqrt(const BigRational& x) {
  if (sgn(x) < 0) return std::nullopt;
  if (sgn(x) == 0) return BigRational(0);
  const BigInt n = x.get_num(), d = x.get_den();
  if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t()))
    return std::nullopt;
  BigInt sn, sd;
  mpz_sqrt(sn.get_mpz_t(), n.get_mpz_t());
  mpz_sqrt(sd.get_mpz_t(), d.get_mpz_t());
  return make_rational(sn, sd);
}

std::string rational_to_string(const BigRational& x) { return x.get_str(); }

std::vector<std::pair<BigInt, int>> factor_integer(const BigInt& n) {
  BigInt m = abs(n);
  if (m == 0) throw ArgumentError("factorization of zero");
  std::vector<std::pair<BigInt, int>> out;
  const long kTrialBound = 1'000'000;
  for (BigInt d = 2; d <= kTrialBound && d * d <= m; d += (d == 2 ? 1 : 2)) {
    if (m % d == 0) {
      int e = 0;
      while (m % d == 0) {
        m /= d;
        ++e;
      }
      out.emplace_back(d, e);
    }
  }
  if (m > 1) {
    if (m > BigInt(kTrialBound) * kTrialBound)
      throw SearchBoundError("integer factorization beyond desk-scale trial bound");
    out.emplace_back(m, 1);
  }
  return out;
}

bool is_prime(const BigInt& n) {
  return mpz_probab_prime_p(n.get_mpz_t(), 40) > 0;
}

// --- literal parsing -------------------------------------------------------------
//
// expression := ['+'|'-'] term (('+'|'-') term)*
// term       := factor (('*'|'/') factor)*
// factor     := base ['^' integer]
// base       := integer | var | '(' expression ')'
//
// The same grammar serves F_q(t) (value type RatFunc) and Q (BigRational).

namespace {

template <class V>
struct ExprOps {
  virtual ~ExprOps() = default;
  virtual V from_integer(const std::string& digits) const = 0;
  virtual std::optional<V> from_symbol(const std::string& name) const = 0;
  virtual V add(const V&, const V&) const = 0;
  virtual V sub(const V&, const V&) const = 0;
  virtual V mul(const V&, const V&) const = 0;
  virtual V div(const V&, const V&) const = 0;
  virtual V neg(const V&) const = 0;
  virtual V pow(const V&, long) const = 0;
};

template <class V>
class ExprParser {
 public:
  ExprParser(const std::string& text, const ExprOps<V>& ops) : text_(text), ops_(ops) {}

  V parse() {
    V v = expression();
    skip_ws();
    if (pos_ != text_.size())
      throw ArgumentError("unexpected trailing input at position " + std::to_string(pos_));
    return v;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  V expression() {
    bool neg = false;
    if (eat('-'))
      neg = true;
    else
      eat('+');
    V acc = term();
    if (neg) acc = ops_.neg(acc);
    while (true) {
      if (eat('+'))
        acc = ops_.add(acc, term());
      else if (eat('-'))
        acc = ops_.sub(acc, term());
      else
        break;
    }
    return acc;
  }

  V term() {
    V acc = factor();
    while (true) {
      if (eat('*'))
        acc = ops_.mul(acc, factor());
      else if (eat('/'))
        acc = ops_.div(acc, factor());
      else
        break;
    }
    return acc;
  }

  V factor() {
    V b = base();
    if (eat('^')) {
      const long e = integer_literal();
      b = ops_.pow(b, e);
    }
    return b;
  }

  long integer_literal() {
    skip_ws();
    bool neg = eat('-');
    std::string digits;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
      digits.push_back(text_[pos_++]);
    if (digits.empty())
      throw ArgumentError("expected integer at position " + std::to_string(pos_));
    return (neg ? -1 : 1) * std::stol(digits);
  }

  V base() {
    skip_ws();
    if (pos_ >= text_.size())
      throw ArgumentError("unexpected end of input at position " + std::to_string(pos_));
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      V v = expression();
      if (!eat(')'))
        throw ArgumentError("missing ')' at position " + std::to_string(pos_));
      return v;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string digits;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
        digits.push_back(text_[pos_++]);
      return ops_.from_integer(digits);
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::string name(1, c);
      ++pos_;
      auto v = ops_.from_symbol(name);
      if (!v)
        throw ArgumentError("unknown symbol '" + name + "' at position " +
                            std::to_string(pos_ - 1));
      return *v;
    }
    throw ArgumentError(std::string("unexpected character '") + c + "' at position " +
                        std::to_string(pos_));
  }

  const std::string& text_;
  const ExprOps<V>& ops_;
  size_t pos_ = 0;
};

struct RatFuncOps final : ExprOps<RatFunc> {
  FFPtr field;
  std::string var;

  RatFunc from_integer(const std::string& digits) const override {
    RatFunc acc = RatFunc::zero(field);
    const RatFunc ten = RatFunc::from_int(field, 10);
    for (char c : digits) acc = acc * ten + RatFunc::from_int(field, c - '0');
    return acc;
  }
  std::optional<RatFunc> from_symbol(const std::string& name) const override {
    if (name == var) return RatFunc(Poly::variable(field));
    if (name == "u" && field->degree() > 1)
      return RatFunc(Poly::constant(field->generator()));
    return std::nullopt;
  }
  RatFunc add(const RatFunc& a, const RatFunc& b) const override { return a + b; }
  RatFunc sub(const RatFunc& a, const RatFunc& b) const override { return a - b; }
  RatFunc mul(const RatFunc& a, const RatFunc& b) const override { return a * b; }
  RatFunc div(const RatFunc& a, const RatFunc& b) const override {
    if (b.is_zero()) throw ArgumentError("division by zero in element literal");
    return a / b;
  }
  RatFunc neg(const RatFunc& a) const override { return -a; }
  RatFunc pow(const RatFunc& a, long e) const override { return a.pow(e); }
};

struct BigRationalOps final : ExprOps<BigRational> {
  BigRational from_integer(const std::string& digits) const override {
    return BigRational(BigInt(digits));
  }
  std::optional<BigRational> from_symbol(const std::string&) const override {
    return std::nullopt;
  }
  BigRational add(const BigRational& a, const BigRational& b) const override { return a + b; }
  BigRational sub(const BigRational& a, const BigRational& b) const override { return a - b; }
  BigRational mul(const BigRational& a, const BigRational& b) const override { return a * b; }
  BigRational div(const BigRational& a, const BigRational& b) const override {
    if (sgn(b) == 0) throw ArgumentError("division by zero in element literal");
    return a / b;
  }
  BigRational neg(const BigRational& a) const override { return -a; }
  BigRational pow(const BigRational& a, long e) const override {
    BigRational acc(1), base = a;
    bool inv = e < 0;
    unsigned long k = inv ? -static_cast<unsigned long>(e) : e;
    for (; k > 0; k >>= 1) {
      if (k & 1) acc *= base;
      base *= base;
    }
    if (inv) {
      if (sgn(acc) == 0) throw ArgumentError("division by zero in element literal");
      acc = 1 / acc;
    }
    return acc;
  }
};

}  // namespace

RatFunc parse_ratfunc(const std::string& text, const FFPtr& field, const std::string& var) {
  RatFuncOps ops;
  ops.field = field;
  ops.var = var;
  return ExprParser<RatFunc>(text, ops).parse();
}

BigRational parse_bigrational(const std::string& text) {
  BigRationalOps ops;
  return ExprParser<BigRational>(text, ops).parse();
}

std::string ratfunc_to_string(const RatFunc& x, const std::string& var) {
  return x.to_string(var);
}

}  // namespace diodef
