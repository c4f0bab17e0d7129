// Command-line front end: build and serialize integrality definitions, decide
// memberships with witness traces, and run verification sweeps.
//
// Exit codes: 0 success, 1 usage or input error, 2 verification failure,
// 3 search-bound exhaustion.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "diodef/harness.hpp"
#include "diodef/serialize.hpp"

namespace {

using namespace diodef;

struct Options {
  std::string field;
  std::string place;
  std::string element;
  std::string def_path;
  std::string out_path;
  std::string a, b, p, q;
  long bound = 2;
  unsigned maxlevel = 1;
  bool char2 = false;
  SearchLimits limits;
};

Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open '" + path + "'");
  Json j;
  in >> j;
  return j;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ArgumentError("cannot write '" + path + "'");
  out << text << "\n";
}

bool is_fqt_literal(const std::string& field, std::uint64_t& q) {
  if (field.size() < 3 || field.front() != 'F' || field.back() != 't') return false;
  const std::string digits = field.substr(1, field.size() - 2);
  if (digits.empty()) return false;
  q = 0;
  for (char c : digits) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    q = q * 10 + static_cast<std::uint64_t>(c - '0');
  }
  return true;
}

FqtField make_fqt(const std::string& field) {
  std::uint64_t q = 0;
  if (!is_fqt_literal(field, q))
    throw ArgumentError("field literal must be FqT-style like 'F3t' (got '" + field + "')");
  return FqtField::with_order(q);
}

int cmd_build(const Options& opt) {
  Json artifact;
  std::uint64_t q = 0;
  if (opt.field == "Q") {
    RationalField K;
    auto def = build_definition(K, K.parse_place(opt.place), opt.limits);
    artifact = definition_to_json(K, def);
  } else if (is_fqt_literal(opt.field, q)) {
    FqtField K = make_fqt(opt.field);
    auto def = build_definition(K, K.parse_place(opt.place), opt.limits);
    artifact = definition_to_json(K, def);
  } else {
    throw ArgumentError("unknown field literal '" + opt.field + "'");
  }
  write_text(opt.out_path, artifact.dump(2));
  std::cout << "wrote " << opt.out_path << "\n";
  return 0;
}

int cmd_decide(const Options& opt) {
  const Json j = load_json(opt.def_path);
  const std::string kind = field_kind_of_json(j);
  Json out;
  if (kind == "Q") {
    RationalField K = q_field_from_json(j.at("field"));
    auto def = definition_from_json(K, j);
    auto tr = decide(K, def, K.parse(opt.element));
    out = trace_to_json(K, tr);
  } else if (kind == "FqT") {
    FqtField K = fqt_field_from_json(j.at("field"));
    auto def = definition_from_json(K, j);
    auto tr = decide(K, def, K.parse(opt.element));
    out = trace_to_json(K, tr);
  } else {
    throw ArgumentError("definition artifact has field kind '" + kind +
                        "'; use perfect-decide for perfect closures");
  }
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_verify(const Options& opt) {
  const Json j = load_json(opt.def_path);
  const std::string kind = field_kind_of_json(j);
  SweepReport rep;
  if (kind == "Q") {
    RationalField K = q_field_from_json(j.at("field"));
    rep = agreement_sweep(K, definition_from_json(K, j), opt.bound);
  } else if (kind == "FqT") {
    FqtField K = fqt_field_from_json(j.at("field"));
    rep = agreement_sweep(K, definition_from_json(K, j), opt.bound);
  } else {
    throw ArgumentError("use perfect-verify for perfect-closure definitions");
  }
  const Json out = report_to_json(rep);
  if (!opt.out_path.empty()) write_text(opt.out_path, out.dump(2));
  std::cout << out.dump(2) << "\n";
  std::cerr << "sweep wall time " << rep.wall_ms << " ms\n";
  return rep.pass() ? 0 : 2;
}

int cmd_perfect_build(const Options& opt) {
  PerfField K(make_fqt(opt.field).constants());
  auto def = build_perf_definition(K, K.base_field().parse_place(opt.place), opt.limits);
  write_text(opt.out_path, perf_definition_to_json(K, def).dump(2));
  std::cout << "wrote " << opt.out_path << "\n";
  return 0;
}

int cmd_perfect_decide(const Options& opt) {
  const Json j = load_json(opt.def_path);
  if (field_kind_of_json(j) != "FqT-perf")
    throw ArgumentError("artifact is not a perfect-closure definition");
  PerfField K = perf_field_from_json(j.at("field"));
  auto def = perf_definition_from_json(K, j);
  auto tr = decide_perf(K, def, K.parse(opt.element));
  std::cout << perf_trace_to_json(K, tr).dump(2) << "\n";
  return 0;
}

int cmd_perfect_verify(const Options& opt) {
  const Json j = load_json(opt.def_path);
  if (field_kind_of_json(j) != "FqT-perf")
    throw ArgumentError("artifact is not a perfect-closure definition");
  PerfField K = perf_field_from_json(j.at("field"));
  auto def = perf_definition_from_json(K, j);
  SweepReport rep = perf_agreement_sweep(K, def, opt.maxlevel, opt.bound);
  const Json out = report_to_json(rep);
  if (!opt.out_path.empty()) write_text(opt.out_path, out.dump(2));
  std::cout << out.dump(2) << "\n";
  std::cerr << "sweep wall time " << rep.wall_ms << " ms\n";
  return rep.pass() ? 0 : 2;
}

int cmd_emit(const Options& opt) {
  if (opt.char2) {
    FqtField K = make_fqt(opt.field);
    auto node = emit_formula_char2(K, K.parse(opt.a), K.parse(opt.b), K.parse(opt.p),
                                   K.parse(opt.q));
    write_text(opt.out_path, formula_to_json(K, node).dump(2));
    std::cout << "wrote " << opt.out_path << "\n";
    return 0;
  }
  const Json j = load_json(opt.def_path);
  Json formula = j.at("formula");
  write_text(opt.out_path, formula.dump(2));
  std::cout << "wrote " << opt.out_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"diophantine definitions of valuation rings in global fields"};
  app.require_subcommand(1);
  Options opt;

  auto add_limits = [&](CLI::App* cmd) {
    cmd->add_option("--coset-cap", opt.limits.coset_cap, "refuse larger coset systems");
    cmd->add_option("--max-degree", opt.limits.max_algebra_degree,
                    "degree cap for the algebra search over F_q(t)");
    cmd->add_option("--max-candidates", opt.limits.max_algebra_candidates,
                    "candidate cap for the algebra search over Q");
  };

  CLI::App* build = app.add_subcommand("build", "construct a definition artifact");
  build->add_option("--field", opt.field, "F3t, F5t, ... or Q")->required();
  build->add_option("--place", opt.place, "finite:<poly> or prime:<p>")->required();
  build->add_option("--out", opt.out_path, "output artifact path")->required();
  add_limits(build);

  CLI::App* decide = app.add_subcommand("decide", "decide integrality via a definition");
  decide->add_option("--def", opt.def_path, "definition artifact")->required();
  decide->add_option("--element", opt.element, "element literal")->required();

  CLI::App* verify = app.add_subcommand("verify", "exhaustive agreement sweep");
  verify->add_option("--def", opt.def_path, "definition artifact")->required();
  verify->add_option("--bound", opt.bound, "height bound")->required();
  verify->add_option("--out", opt.out_path, "report path");

  CLI::App* pbuild = app.add_subcommand("perfect-build", "definition over the perfect closure");
  pbuild->add_option("--field", opt.field, "F3t, F5t, ... (characteristic > 2)")->required();
  pbuild->add_option("--place", opt.place, "finite:<poly>")->required();
  pbuild->add_option("--out", opt.out_path, "output artifact path")->required();
  add_limits(pbuild);

  CLI::App* pdecide = app.add_subcommand("perfect-decide", "decide over the perfect closure");
  pdecide->add_option("--def", opt.def_path, "definition artifact")->required();
  pdecide->add_option("--element", opt.element, "element literal, e.g. 'level=1; s^2+1'")
      ->required();

  CLI::App* pverify = app.add_subcommand("perfect-verify", "perfect-closure agreement sweep");
  pverify->add_option("--def", opt.def_path, "definition artifact")->required();
  pverify->add_option("--bound", opt.bound, "height bound")->required();
  pverify->add_option("--maxlevel", opt.maxlevel, "level bound");
  pverify->add_option("--out", opt.out_path, "report path");

  CLI::App* emit = app.add_subcommand("emit", "emit a formula tree");
  emit->add_option("--def", opt.def_path, "definition artifact to extract from");
  emit->add_option("--out", opt.out_path, "output path")->required();
  emit->add_flag("--char2", opt.char2, "emit the characteristic-2 norm equation instead");
  emit->add_option("--field", opt.field, "characteristic-2 field, e.g. F2t");
  emit->add_option("--a", opt.a, "structure constant a");
  emit->add_option("--b", opt.b, "structure constant b");
  emit->add_option("--p", opt.p, "uniformizing element p");
  emit->add_option("--q", opt.q, "uniformizing element q");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (build->parsed()) return cmd_build(opt);
    if (decide->parsed()) return cmd_decide(opt);
    if (verify->parsed()) return cmd_verify(opt);
    if (pbuild->parsed()) return cmd_perfect_build(opt);
    if (pdecide->parsed()) return cmd_perfect_decide(opt);
    if (pverify->parsed()) return cmd_perfect_verify(opt);
    if (emit->parsed()) return cmd_emit(opt);
    std::cerr << "no subcommand\n";
    return 1;
  } catch (const SearchBoundError& e) {
    std::cerr << "search bound exhausted: " << e.what() << "\n";
    return 3;
  } catch (const VerificationError& e) {
    std::cerr << "verification failure: " << e.what() << "\n";
    return 2;
  } catch (const PrecisionError& e) {
    std::cerr << "verification failure: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
