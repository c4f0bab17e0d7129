#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "diodef/exactalg.hpp"

namespace diodef {

// ---------------------------------------------------------------------------
// Existential-positive formula trees over a field: AND/OR combinations of
// polynomial equations under existential quantifiers. This is the emitted
// artifact shape; evaluation is witness checking (an Exists node is satisfied
// only when the environment binds all of its variables).
// ---------------------------------------------------------------------------

template <class F>
class FPoly {
 public:
  using Elem = typename F::Elem;
  using Monomial = std::map<std::string, unsigned>;

  struct Term {
    Elem coeff;
    Monomial mono;
  };

  FPoly() = default;

  static FPoly constant(const F& K, Elem c) {
    FPoly p;
    if (!is_zero(c)) p.terms_.push_back({std::move(c), {}});
    (void)K;
    return p;
  }

  static FPoly variable(const F& K, const std::string& name) {
    FPoly p;
    p.terms_.push_back({K.one(), {{name, 1}}});
    return p;
  }

  const std::vector<Term>& terms() const { return terms_; }

  friend FPoly operator+(const FPoly& f, const FPoly& g) {
    FPoly r = f;
    for (const auto& t : g.terms_) r.add_term(t.coeff, t.mono);
    return r;
  }

  friend FPoly operator-(const FPoly& f, const FPoly& g) {
    FPoly r = f;
    for (const auto& t : g.terms_) r.add_term(-t.coeff, t.mono);
    return r;
  }

  friend FPoly operator*(const FPoly& f, const FPoly& g) {
    FPoly r;
    for (const auto& s : f.terms_) {
      for (const auto& t : g.terms_) {
        Monomial m = s.mono;
        for (const auto& [v, e] : t.mono) m[v] += e;
        r.add_term(s.coeff * t.coeff, m);
      }
    }
    return r;
  }

  std::vector<std::string> variables() const {
    std::vector<std::string> out;
    for (const auto& t : terms_)
      for (const auto& [v, e] : t.mono)
        if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
    std::sort(out.begin(), out.end());
    return out;
  }

  // Exact evaluation; throws if a variable is unbound.
  Elem eval(const F& K, const std::map<std::string, Elem>& env) const {
    Elem acc = K.zero();
    for (const auto& t : terms_) {
      Elem v = t.coeff;
      for (const auto& [name, e] : t.mono) {
        auto it = env.find(name);
        if (it == env.end()) throw ArgumentError("unbound variable '" + name + "'");
        for (unsigned i = 0; i < e; ++i) v = v * it->second;
      }
      acc = acc + v;
    }
    return acc;
  }

  void add_term(const Elem& c, const Monomial& m) {
    if (is_zero(c)) return;
    for (size_t i = 0; i < terms_.size(); ++i) {
      if (terms_[i].mono == m) {
        terms_[i].coeff = terms_[i].coeff + c;
        if (is_zero(terms_[i].coeff)) terms_.erase(terms_.begin() + i);
        return;
      }
    }
    terms_.push_back({c, m});
    std::sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) {
      return a.mono < b.mono;  // lexicographic on the ordered monomial maps
    });
  }

 private:
  std::vector<Term> terms_;
};

template <class F>
struct FormulaNode {
  enum class Kind { Exists, And, Or, Eq };

  Kind kind = Kind::And;
  std::vector<std::string> vars;          // Exists
  std::vector<FormulaNode> children;      // Exists (exactly one), And, Or
  FPoly<F> poly;                          // Eq: poly = 0

  static FormulaNode exists(std::vector<std::string> vars, FormulaNode child) {
    FormulaNode n;
    n.kind = Kind::Exists;
    n.vars = std::move(vars);
    n.children.push_back(std::move(child));
    return n;
  }
  static FormulaNode conj(std::vector<FormulaNode> children) {
    FormulaNode n;
    n.kind = Kind::And;
    n.children = std::move(children);
    return n;
  }
  static FormulaNode disj(std::vector<FormulaNode> children) {
    FormulaNode n;
    n.kind = Kind::Or;
    n.children = std::move(children);
    return n;
  }
  static FormulaNode eq(FPoly<F> poly) {
    FormulaNode n;
    n.kind = Kind::Eq;
    n.poly = std::move(poly);
    return n;
  }
};

// Witness checking: does `env` demonstrate satisfaction? Branches whose
// existential variables are not all bound count as unsatisfied rather than
// raising, so a single witness can pick its disjunct.
template <class F>
bool formula_witnessed(const F& K, const FormulaNode<F>& node,
                       const std::map<std::string, typename F::Elem>& env) {
  using Kind = typename FormulaNode<F>::Kind;
  switch (node.kind) {
    case Kind::Exists:
      for (const auto& v : node.vars)
        if (env.find(v) == env.end()) return false;
      return formula_witnessed(K, node.children.at(0), env);
    case Kind::And:
      for (const auto& c : node.children)
        if (!formula_witnessed(K, c, env)) return false;
      return true;
    case Kind::Or:
      for (const auto& c : node.children)
        if (formula_witnessed(K, c, env)) return true;
      return false;
    case Kind::Eq: {
      for (const auto& v : node.poly.variables())
        if (env.find(v) == env.end()) return false;
      return is_zero(node.poly.eval(K, env));
    }
  }
  return false;
}

// Structural statistics used by tests and artifact consumers.
template <class F>
void formula_count_nodes(const FormulaNode<F>& node, std::size_t& exists, std::size_t& eqs) {
  using Kind = typename FormulaNode<F>::Kind;
  if (node.kind == Kind::Exists) ++exists;
  if (node.kind == Kind::Eq) ++eqs;
  for (const auto& c : node.children) formula_count_nodes(c, exists, eqs);
}

}  // namespace diodef
