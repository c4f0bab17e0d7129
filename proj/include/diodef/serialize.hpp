#pragma once

#include <json.hpp>

#include "diodef/diophdef.hpp"
#include "diodef/harness.hpp"
#include "diodef/perfectclosure.hpp"

namespace diodef {

// ---------------------------------------------------------------------------
// JSON artifact schemas. All elements and places appear in the CLI literal
// grammar; printing is canonical, so serialize(parse(serialize(x))) is a
// byte-level fixed point. Schemas are versioned.
// ---------------------------------------------------------------------------

using Json = nlohmann::ordered_json;

inline constexpr const char* kDefinitionSchema = "diodef/definition/1";
inline constexpr const char* kPerfDefinitionSchema = "diodef/perfect-definition/1";
inline constexpr const char* kReportSchema = "diodef/report/1";

Json field_to_json(const FqtField& K);
Json field_to_json(const RationalField& K);
Json field_to_json(const PerfField& K);
// "FqT" / "Q" / "FqT-perf"
std::string field_kind_of_json(const Json& j);
FqtField fqt_field_from_json(const Json& j);
RationalField q_field_from_json(const Json& j);
PerfField perf_field_from_json(const Json& j);

// --- formula trees ---

template <class F>
Json formula_to_json(const F& K, const FormulaNode<F>& node) {
  Json j;
  using Kind = typename FormulaNode<F>::Kind;
  switch (node.kind) {
    case Kind::Exists: {
      j["op"] = "exists";
      j["vars"] = node.vars;
      j["child"] = formula_to_json(K, node.children.at(0));
      break;
    }
    case Kind::And:
    case Kind::Or: {
      j["op"] = node.kind == Kind::And ? "and" : "or";
      Json kids = Json::array();
      for (const auto& c : node.children) kids.push_back(formula_to_json(K, c));
      j["children"] = std::move(kids);
      break;
    }
    case Kind::Eq: {
      j["op"] = "eq";
      Json terms = Json::array();
      for (const auto& t : node.poly.terms()) {
        Json jt;
        jt["c"] = K.to_string(t.coeff);
        Json mono = Json::object();
        for (const auto& [v, e] : t.mono) mono[v] = e;
        jt["m"] = std::move(mono);
        terms.push_back(std::move(jt));
      }
      j["terms"] = std::move(terms);
      break;
    }
  }
  return j;
}

template <class F>
FormulaNode<F> formula_from_json(const F& K, const Json& j) {
  const std::string op = j.at("op").get<std::string>();
  if (op == "exists") {
    std::vector<std::string> vars = j.at("vars").get<std::vector<std::string>>();
    return FormulaNode<F>::exists(std::move(vars), formula_from_json(K, j.at("child")));
  }
  if (op == "and" || op == "or") {
    std::vector<FormulaNode<F>> kids;
    for (const auto& c : j.at("children")) kids.push_back(formula_from_json(K, c));
    return op == "and" ? FormulaNode<F>::conj(std::move(kids))
                       : FormulaNode<F>::disj(std::move(kids));
  }
  if (op == "eq") {
    FPoly<F> poly;
    for (const auto& jt : j.at("terms")) {
      typename FPoly<F>::Monomial mono;
      for (const auto& [v, e] : jt.at("m").items()) mono[v] = e.template get<unsigned>();
      poly.add_term(K.parse(jt.at("c").template get<std::string>()), mono);
    }
    return FormulaNode<F>::eq(std::move(poly));
  }
  throw ArgumentError("unknown formula node '" + op + "'");
}

// --- integrality definitions ---

template <class F>
Json definition_to_json(const F& K, const IntegralityDefinition<F>& def) {
  Json j;
  j["schema"] = kDefinitionSchema;
  j["field"] = field_to_json(K);
  j["target_place"] = K.place_to_string(def.target);
  Json copies = Json::array();
  for (const auto& c : def.copies) {
    Json jc;
    jc["helper_place"] = K.place_to_string(c.helper);
    jc["p"] = K.to_string(c.p);
    jc["q"] = K.to_string(c.q);
    jc["a"] = K.to_string(c.a);
    jc["b"] = K.to_string(c.b);
    jc["r"] = c.r;
    jc["helper_classes"] = c.helper_classes;
    Json reps = Json::array();
    for (const auto& s : c.coset_reps) reps.push_back(K.to_string(s));
    jc["coset_reps"] = std::move(reps);
    copies.push_back(std::move(jc));
  }
  j["copies"] = std::move(copies);
  j["formula"] = formula_to_json(K, def.formula);
  return j;
}

template <class F>
IntegralityDefinition<F> definition_from_json(const F& K, const Json& j) {
  if (j.at("schema").get<std::string>() != kDefinitionSchema)
    throw ArgumentError("unexpected definition schema");
  IntegralityDefinition<F> def{K, K.parse_place(j.at("target_place").get<std::string>()),
                               {}, {}};
  const auto& copies = j.at("copies");
  if (copies.size() != 2) throw ArgumentError("definition must carry two copies");
  for (int c = 0; c < 2; ++c) {
    const auto& jc = copies.at(c);
    DefinitionCopy<F> copy;
    copy.helper = K.parse_place(jc.at("helper_place").get<std::string>());
    copy.p = K.parse(jc.at("p").get<std::string>());
    copy.q = K.parse(jc.at("q").get<std::string>());
    copy.a = K.parse(jc.at("a").get<std::string>());
    copy.b = K.parse(jc.at("b").get<std::string>());
    copy.r = jc.at("r").get<long>();
    copy.helper_classes = jc.at("helper_classes").get<std::uint64_t>();
    for (const auto& s : jc.at("coset_reps"))
      copy.coset_reps.push_back(K.parse(s.template get<std::string>()));
    def.copies[c] = std::move(copy);
  }
  def.formula = formula_from_json(K, j.at("formula"));
  return def;
}

// --- perfect-closure definitions ---

Json perf_definition_to_json(const PerfField& K, const PerfIntegralityDefinition& def);
PerfIntegralityDefinition perf_definition_from_json(const PerfField& K, const Json& j);

// --- decision traces ---

template <class F>
Json trace_to_json(const F& K, const DecisionTrace<F>& tr) {
  Json j;
  j["verdict"] = tr.verdict;
  j["y"] = K.to_string(tr.y);
  j["z"] = K.to_string(tr.z);
  for (int c = 0; c < 2; ++c) {
    Json jc;
    jc["member"] = tr.copy[c].member;
    if (tr.copy[c].coset_hit)
      jc["coset_hit"] = *tr.copy[c].coset_hit;
    else
      jc["coset_hit"] = nullptr;
    jc["cosets_tried"] = tr.copy[c].cosets_tried;
    j[c == 0 ? "copy0" : "copy1"] = std::move(jc);
  }
  return j;
}

Json perf_trace_to_json(const PerfField& K, const PerfDecisionTrace& tr);

// --- sweep reports ---

// Canonical artifact: wall time excluded so identical configurations produce
// byte-identical files; the timing goes to the log instead.
Json report_to_json(const SweepReport& rep);

}  // namespace diodef
