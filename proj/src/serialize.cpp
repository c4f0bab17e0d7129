#include "diodef/serialize.hpp"

namespace diodef {

Json field_to_json(const FqtField& K) {
  Json j;
  j["kind"] = "FqT";
  j["q"] = K.q();
  j["p"] = K.characteristic();
  j["m"] = K.constants()->degree();
  j["modulus"] = K.constants()->modulus();
  return j;
}

Json field_to_json(const RationalField&) {
  Json j;
  j["kind"] = "Q";
  return j;
}

Json field_to_json(const PerfField& K) {
  Json j = field_to_json(K.base_field());
  j["kind"] = "FqT-perf";
  return j;
}

std::string field_kind_of_json(const Json& j) {
  return j.at("field").at("kind").get<std::string>();
}

FqtField fqt_field_from_json(const Json& j) {
  const std::uint32_t p = j.at("p").get<std::uint32_t>();
  auto modulus = j.at("modulus").get<std::vector<std::uint32_t>>();
  return FqtField(FiniteField::with_modulus(p, std::move(modulus)));
}

RationalField q_field_from_json(const Json&) { return RationalField{}; }

PerfField perf_field_from_json(const Json& j) {
  const std::uint32_t p = j.at("p").get<std::uint32_t>();
  auto modulus = j.at("modulus").get<std::vector<std::uint32_t>>();
  return PerfField(FiniteField::with_modulus(p, std::move(modulus)));
}

Json perf_definition_to_json(const PerfField& K, const PerfIntegralityDefinition& def) {
  const FqtField& B = K.base_field();
  Json j;
  j["schema"] = kPerfDefinitionSchema;
  j["field"] = field_to_json(K);
  j["target_place"] = B.place_to_string(def.target);
  Json copies = Json::array();
  for (const auto& c : def.copies) {
    Json jc;
    jc["helper_place"] = B.place_to_string(c.helper);
    jc["a"] = B.to_string(c.a);
    jc["b"] = B.to_string(c.b);
    Json basis = Json::array();
    for (const auto& e : c.basis.basis) {
      Json coords = Json::array();
      for (const auto& x : e.c) coords.push_back(B.to_string(x));
      basis.push_back(std::move(coords));
    }
    jc["basis"] = std::move(basis);
    Json gram = Json::array();
    for (const auto& row : c.basis.gram) {
      Json jr = Json::array();
      for (const auto& x : row) jr.push_back(B.to_string(x));
      gram.push_back(std::move(jr));
    }
    jc["gram"] = std::move(gram);
    jc["det"] = B.to_string(c.basis.det);
    // residue-field elements travel as counting indices (prime fields: the
    // usual integer mod p)
    jc["nonsquare_shift_target"] = c.shift1.index();
    jc["nonsquare_shift_helper"] = c.shift2.index();
    jc["n1"] = c.n1;
    jc["n2"] = c.n2;
    Json alphas = Json::array();
    for (const auto& alpha : c.alphas) alphas.push_back(K.to_string(alpha));
    jc["alpha_shifts"] = std::move(alphas);
    copies.push_back(std::move(jc));
  }
  j["copies"] = std::move(copies);
  j["formula"] = formula_to_json(K, def.formula);
  return j;
}

PerfIntegralityDefinition perf_definition_from_json(const PerfField& K, const Json& j) {
  if (j.at("schema").get<std::string>() != kPerfDefinitionSchema)
    throw ArgumentError("unexpected perfect-definition schema");
  const FqtField& B = K.base_field();
  PerfIntegralityDefinition def{K, B.parse_place(j.at("target_place").get<std::string>()),
                                {}, {}};
  const auto& copies = j.at("copies");
  if (copies.size() != 2) throw ArgumentError("definition must carry two copies");
  for (int c = 0; c < 2; ++c) {
    const auto& jc = copies.at(c);
    PerfCopy copy;
    copy.helper = B.parse_place(jc.at("helper_place").get<std::string>());
    copy.a = B.parse(jc.at("a").get<std::string>());
    copy.b = B.parse(jc.at("b").get<std::string>());
    copy.basis.a = copy.a;
    copy.basis.b = copy.b;
    const auto& jb = jc.at("basis");
    for (int i = 0; i < 4; ++i) {
      const auto& coords = jb.at(i);
      for (int k = 0; k < 4; ++k)
        copy.basis.basis[i].c[k] = B.parse(coords.at(k).get<std::string>());
    }
    const auto& jg = jc.at("gram");
    for (int i = 0; i < 4; ++i)
      for (int k = 0; k < 4; ++k)
        copy.basis.gram[i][k] = B.parse(jg.at(i).at(k).get<std::string>());
    copy.basis.det = B.parse(jc.at("det").get<std::string>());
    const FFPtr k1 = B.residue_field(def.target);
    const FFPtr k2 = B.residue_field(copy.helper);
    copy.shift1 = k1->from_index(jc.at("nonsquare_shift_target").get<std::uint64_t>());
    copy.shift2 = k2->from_index(jc.at("nonsquare_shift_helper").get<std::uint64_t>());
    copy.n1 = jc.at("n1").get<std::uint64_t>();
    copy.n2 = jc.at("n2").get<std::uint64_t>();
    for (const auto& alpha : jc.at("alpha_shifts"))
      copy.alphas.push_back(K.parse(alpha.get<std::string>()));
    def.copies[c] = std::move(copy);
  }
  def.formula = formula_from_json(K, j.at("formula"));
  return def;
}

Json report_to_json(const SweepReport& rep) {
  Json j;
  j["schema"] = kReportSchema;
  Json cfg;
  cfg["field"] = rep.field;
  cfg["place"] = rep.place;
  cfg["bound"] = rep.bound;
  if (rep.maxlevel > 0) cfg["maxlevel"] = rep.maxlevel;
  j["config"] = std::move(cfg);
  Json counts;
  counts["tested"] = rep.tested;
  counts["agreed"] = rep.agreed;
  counts["disagreed"] = rep.disagreed;
  j["counts"] = std::move(counts);
  j["disagreements"] = rep.disagreements;
  return j;
}

Json perf_trace_to_json(const PerfField& K, const PerfDecisionTrace& tr) {
  Json j;
  j["verdict"] = tr.verdict;
  j["y"] = K.to_string(tr.y);
  j["z"] = K.to_string(tr.z);
  for (int c = 0; c < 2; ++c) {
    Json jc;
    jc["member"] = tr.copy[c].member;
    if (tr.copy[c].shift_hit)
      jc["shift_hit"] = *tr.copy[c].shift_hit;
    else
      jc["shift_hit"] = nullptr;
    jc["shifts_tried"] = tr.copy[c].shifts_tried;
    j[c == 0 ? "copy0" : "copy1"] = std::move(jc);
  }
  return j;
}

}  // namespace diodef
