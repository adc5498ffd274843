#include "mixshape/job.hpp"

#include <cmath>
#include <sstream>

#include "mixshape/cyclo.hpp"
#include "mixshape/exact.hpp"
#include "mixshape/families.hpp"
#include "mixshape/groups.hpp"
#include "mixshape/limits.hpp"
#include "mixshape/mixing.hpp"
#include "mixshape/oracle.hpp"

namespace mixshape::cli {

using exact::Int;
using exact::IntMat;
using exact::IntVec;
using exact::Rat;
using nlohmann::json;

namespace {

Int parse_int(const json& v) {
  if (v.is_number_integer()) return Int(static_cast<long>(v.get<long long>()));
  if (v.is_string()) {
    try {
      return Int(v.get<std::string>());
    } catch (const std::invalid_argument&) {
      throw parse_error("not a decimal integer: " + v.get<std::string>());
    }
  }
  throw parse_error("expected integer or decimal string");
}

Rat parse_rational(const json& v) {
  if (v.is_number_integer()) return Rat(static_cast<long>(v.get<long long>()));
  if (v.is_string()) {
    try {
      return exact::parse_rat(v.get<std::string>());
    } catch (const std::invalid_argument&) {
      throw parse_error("not a rational: " + v.get<std::string>());
    }
  }
  throw parse_error("expected rational as integer or \"p/q\" string");
}

IntVec parse_vector(const json& v) {
  if (!v.is_array() || v.empty()) throw parse_error("expected a nonempty integer vector");
  IntVec out;
  for (const json& e : v) out.push_back(parse_int(e));
  return out;
}

IntMat parse_matrix(const json& v) {
  if (!v.is_array() || v.empty()) throw parse_error("expected a matrix as an array of rows");
  std::vector<IntVec> rows;
  for (const json& r : v) rows.push_back(parse_vector(r));
  for (const IntVec& r : rows)
    if (r.size() != rows.size()) throw parse_error("matrix is not square");
  return IntMat::from_rows(rows);
}

std::vector<IntMat> parse_matrices(const json& payload, std::size_t min_count) {
  if (!payload.contains("matrices")) throw parse_error("payload field \"matrices\" is required");
  const json& ms = payload.at("matrices");
  if (!ms.is_array() || ms.size() < min_count)
    throw parse_error("at least " + std::to_string(min_count) + " matrices required");
  std::vector<IntMat> out;
  for (const json& m : ms) out.push_back(parse_matrix(m));
  if (payload.contains("dim")) {
    std::size_t dim = payload.at("dim").get<std::size_t>();
    for (const IntMat& m : out)
      if (m.dim() != dim) throw parse_error("matrix dimension disagrees with \"dim\"");
  }
  return out;
}

json options_of(const json& payload) {
  if (!payload.contains("options")) return json::object();
  if (!payload.at("options").is_object()) throw parse_error("\"options\" must be an object");
  return payload.at("options");
}

template <typename T>
T option_or(const json& opts, const std::string& key, T fallback) {
  if (!opts.contains(key)) return fallback;
  return opts.at(key).get<T>();
}

json vec_json(const IntVec& v) {
  json out = json::array();
  for (const Int& x : v) out.push_back(x.get_str());
  return out;
}

json mat_json(const IntMat& m) {
  json out = json::array();
  for (std::size_t i = 0; i < m.dim(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.dim(); ++j) row.push_back(m.at(i, j).get_str());
    out.push_back(row);
  }
  return out;
}

json tuple_json(const std::vector<IntVec>& tuple) {
  json out = json::array();
  for (const IntVec& v : tuple) out.push_back(vec_json(v));
  return out;
}

json crat_json(const limits::CRat& z) {
  return json{{"re", exact::rat_to_string(z.re)}, {"im", exact::rat_to_string(z.im)}};
}

mixing::EngineOptions engine_options(const json& opts) {
  mixing::EngineOptions eo;
  if (opts.contains("max_exponent")) eo.max_exponent = opts.at("max_exponent").get<unsigned long>();
  return eo;
}

std::vector<limits::TrigPoly> parse_functions(const json& payload, std::size_t count,
                                              std::size_t dim) {
  std::vector<limits::TrigPoly> fs;
  if (payload.contains("trigpolys")) {
    for (const json& f : payload.at("trigpolys")) {
      limits::TrigPoly tp(dim);
      if (!f.contains("terms")) throw parse_error("trigpoly needs a \"terms\" array");
      for (const json& term : f.at("terms")) {
        IntVec chi = parse_vector(term.at("character"));
        Rat re = term.contains("re") ? parse_rational(term.at("re")) : Rat(0);
        Rat im = term.contains("im") ? parse_rational(term.at("im")) : Rat(0);
        tp.set_term(chi, limits::CRat{re, im});
      }
      fs.push_back(std::move(tp));
    }
  } else if (payload.contains("characters")) {
    for (const json& chi : payload.at("characters"))
      fs.push_back(limits::TrigPoly::character(parse_vector(chi)));
  } else {
    throw parse_error("payload needs \"trigpolys\" or \"characters\"");
  }
  if (fs.size() != count) throw parse_error("one function per map required");
  return fs;
}

std::string verdict_summary(const mixing::MixingVerdict& v) {
  if (mixing::is_mixing(v)) return "mixing";
  const auto& nm = std::get<mixing::NotMixing>(v);
  return "not mixing at exponent " + std::to_string(nm.exponent);
}

json run_mixing_set(const json& payload, std::string& summary) {
  auto maps = parse_matrices(payload, 2);
  mixing::EpiSet f(maps);
  mixing::EngineOptions eo = engine_options(options_of(payload));
  mixing::MixingVerdict verdict = mixing::is_mixing_set(f, eo);
  json report{{"command", "mixing-set"}, {"dim", f.dim()}, {"maps", f.size()}};
  std::vector<unsigned long> schedule = mixing::exponent_schedule(f.dim(), eo);
  if (mixing::is_mixing(verdict)) {
    report["verdict"] = "mixing";
    report["exponents_checked"] = std::get<mixing::Mixing>(verdict).exponents_checked;
  } else {
    const auto& nm = std::get<mixing::NotMixing>(verdict);
    report["verdict"] = "not_mixing";
    report["exponent"] = nm.exponent;
    report["witness"] = tuple_json(nm.witness);
    report["support"] = nm.support;
    std::vector<unsigned long> checked;
    for (unsigned long l : schedule) {
      checked.push_back(l);
      if (l == nm.exponent) break;
    }
    report["exponents_checked"] = checked;
  }
  summary = verdict_summary(verdict);
  return report;
}

json run_limit(const json& payload, std::string& summary) {
  auto maps = parse_matrices(payload, 1);
  mixing::EpiSet f(maps);
  json opts = options_of(payload);
  auto fs = parse_functions(payload, f.size(), f.dim());
  limits::ProgressionLimit lim = limits::progression_limits(f, fs);
  json values = json::object();
  if (opts.contains("residue")) {
    unsigned long k = opts.at("residue").get<unsigned long>();
    if (k >= lim.modulus) throw std::invalid_argument("limit: residue out of range");
    values[std::to_string(k)] = crat_json(lim.values[k]);
  } else {
    for (unsigned long k = 0; k < lim.modulus; ++k)
      values[std::to_string(k)] = crat_json(lim.values[k]);
  }
  summary = "modulus " + std::to_string(lim.modulus);
  return json{{"command", "limit"},
              {"dim", f.dim()},
              {"maps", f.size()},
              {"modulus", lim.modulus},
              {"values", values}};
}

json run_gen_example(const json& payload, std::string& summary) {
  json opts = options_of(payload);
  std::string kind = option_or<std::string>(opts, "kind", "");
  if (kind.empty()) throw parse_error("gen-example needs options.kind");
  json report{{"command", "gen-example"}, {"kind", kind}};
  auto emit = [&](const mixing::EpiSet& f) {
    json ms = json::array();
    for (const IntMat& m : f.maps) ms.push_back(mat_json(m));
    report["dim"] = f.dim();
    report["matrices"] = ms;
  };

  if (kind == "fixtures") {
    families::Fixtures fx = families::fixtures();
    std::string name = option_or<std::string>(opts, "name", "st");
    if (name == "st")
      emit(fx.st);
    else if (name == "free-scaled")
      emit(fx.free_scaled);
    else if (name == "row-stabilizer")
      emit(fx.row_stabilizer);
    else if (name == "lorentz")
      emit(fx.lorentz);
    else
      throw parse_error("unknown fixture name: " + name);
    report["name"] = name;
    summary = "fixture " + name;
    return report;
  }

  families::FamilySpec spec;
  spec.d = option_or<unsigned>(opts, "d", 2);
  spec.s = option_or<unsigned>(opts, "s", spec.d + 1);
  spec.d1 = option_or<unsigned>(opts, "d1", 2);
  spec.d2 = option_or<unsigned>(opts, "d2", 2);
  if (opts.contains("q")) spec.q = parse_int(opts.at("q"));
  if (kind == "unipotent")
    spec.kind = families::FamilyKind::kUnipotentSharp;
  else if (kind == "eisenstein")
    spec.kind = families::FamilyKind::kEisensteinPoly;
  else if (kind == "epi")
    spec.kind = families::FamilyKind::kEpiSharp;
  else if (kind == "block-triangular")
    spec.kind = families::FamilyKind::kBlockTriangular;
  else if (kind == "scaled-free")
    spec.kind = families::FamilyKind::kScaledFreePair;
  else if (kind == "rotation-pair")
    spec.kind = families::FamilyKind::kRotationPair;
  else
    throw parse_error("unknown example kind: " + kind);

  families::GeneratedFamily out = families::generate(spec);
  if (std::holds_alternative<mixing::EpiSet>(out)) {
    emit(std::get<mixing::EpiSet>(out));
    summary = kind + " family generated";
  } else {
    const exact::IntPoly& p = std::get<exact::IntPoly>(out);
    json coeffs = json::array();
    for (const Int& c : p.coeffs()) coeffs.push_back(c.get_str());
    report["coefficients"] = coeffs;
    summary = "polynomial of degree " + std::to_string(p.degree());
  }
  return report;
}

json run_group_scan(const json& payload, std::string& summary) {
  auto maps = parse_matrices(payload, 1);
  mixing::EpiSet gens(maps);
  json opts = options_of(payload);
  unsigned word_len = option_or<unsigned>(opts, "word_len", 4);
  bool use_inverses = option_or<bool>(opts, "use_inverses", false);
  groups::GroupScanReport report = groups::group_mixing_scan(gens, word_len, use_inverses);
  json out{{"command", "group-scan"}, {"dim", gens.dim()}};
  if (std::holds_alternative<groups::Refuted>(report)) {
    const auto& r = std::get<groups::Refuted>(report);
    out["result"] = "refuted";
    out["word"] = groups::word_to_string(r.word);
    out["word_codes"] = r.word;
    out["matrix"] = mat_json(r.matrix);
    out["reason"] = r.reason == groups::RefutationReason::kRootOfUnityEigenvalue
                        ? "root_of_unity_eigenvalue"
                        : "finite_order_only";
    summary = "refuted by " + groups::word_to_string(r.word);
  } else {
    const auto& c = std::get<groups::CleanUpTo>(report);
    out["result"] = "clean";
    out["max_word_length"] = c.max_word_length;
    out["words_examined"] = c.words_examined;
    summary = "clean up to length " + std::to_string(c.max_word_length);
  }
  return out;
}

json run_oracle_search(const json& payload, std::string& summary) {
  auto maps = parse_matrices(payload, 1);
  mixing::EpiSet f(maps);
  json opts = options_of(payload);
  long height = option_or<long>(opts, "height", 3);
  unsigned long horizon = option_or<unsigned long>(opts, "horizon", 48);
  unsigned order = option_or<unsigned>(opts, "order", 2);
  json out{{"command", "oracle-search"}, {"dim", f.dim()}, {"order", order}};
  if (order == 2) {
    unsigned long min_hits = option_or<unsigned long>(opts, "min_hits", 3);
    auto witness = oracle::brute_force_relation_search(f, height, horizon, min_hits);
    out["witness"] = witness ? tuple_json(*witness) : json();
    summary = witness ? "witness found" : "no witness";
  } else {
    unsigned word_len = option_or<unsigned>(opts, "word_len", 2);
    std::string form_name = option_or<std::string>(opts, "form", "semigroup");
    oracle::ProductForm form;
    if (form_name == "semigroup")
      form = oracle::ProductForm::kSemigroupPowers;
    else if (form_name == "group")
      form = oracle::ProductForm::kGroupPowerQuotients;
    else
      throw parse_error("options.form must be \"semigroup\" or \"group\"");
    auto witness = oracle::higher_order_refute(f, order, word_len, height, horizon, form);
    if (witness) {
      json words = json::array();
      for (const groups::Word& w : witness->words) words.push_back(groups::word_to_string(w));
      out["witness"] = json{{"words", words}, {"tuple", tuple_json(witness->tuple)}};
      summary = "order-" + std::to_string(order) + " witness found";
    } else {
      out["witness"] = json();
      summary = "no witness";
    }
  }
  return out;
}

json run_oracle_mc(const json& payload, std::string& summary) {
  auto maps = parse_matrices(payload, 1);
  mixing::EpiSet f(maps);
  json opts = options_of(payload);
  unsigned long n = option_or<unsigned long>(opts, "n", 0);
  std::size_t samples = option_or<std::size_t>(opts, "samples", 100000);
  std::uint64_t seed = option_or<std::uint64_t>(opts, "seed", 1);
  if (!payload.contains("boxes")) throw parse_error("oracle-mc needs \"boxes\"");
  std::vector<oracle::BoxSet> boxes;
  for (const json& b : payload.at("boxes")) {
    std::vector<std::pair<Rat, Rat>> intervals;
    for (const json& iv : b) {
      if (!iv.is_array() || iv.size() != 2) throw parse_error("box interval must be [a, b]");
      intervals.emplace_back(parse_rational(iv[0]), parse_rational(iv[1]));
    }
    boxes.emplace_back(std::move(intervals));
  }
  double estimate = oracle::mc_correlation(f, n, boxes, samples, seed);
  double se = std::sqrt(std::max(estimate * (1.0 - estimate), 0.0) / static_cast<double>(samples));
  std::ostringstream os;
  os << "estimate " << estimate << " (se " << se << ")";
  summary = os.str();
  return json{{"command", "oracle-mc"}, {"dim", f.dim()},
              {"n", n},                 {"samples", samples},
              {"seed", seed},           {"estimate", estimate},
              {"standard_error", se}};
}

json run_verify_cert(const json& payload, std::string& summary) {
  auto maps = parse_matrices(payload, 1);
  mixing::EpiSet f(maps);
  json opts = options_of(payload);
  if (!payload.contains("certificate")) throw parse_error("verify-cert needs \"certificate\"");
  const json& cert = payload.at("certificate");
  if (!cert.contains("exponent") || !cert.contains("witness"))
    throw parse_error("certificate needs \"exponent\" and \"witness\"");
  unsigned long l = cert.at("exponent").get<unsigned long>();
  std::vector<IntVec> witness;
  for (const json& v : cert.at("witness")) witness.push_back(parse_vector(v));
  unsigned long depth =
      option_or<unsigned long>(opts, "depth", 5 * f.size() * f.dim());
  bool valid = oracle::verify_witness(f, l, witness, depth);
  summary = valid ? "certificate valid" : "certificate INVALID";
  return json{{"command", "verify-cert"}, {"dim", f.dim()}, {"exponent", l},
              {"depth", depth},           {"valid", valid}};
}

json dispatch(const std::string& command, const json& payload, std::string& summary) {
  if (command == "ergodic") {
    auto maps = parse_matrices(payload, 1);
    if (maps.size() != 1) throw parse_error("ergodic takes exactly one matrix");
    bool e = mixing::is_ergodic(maps[0]);
    summary = e ? "ergodic" : "not ergodic";
    return json{{"command", "ergodic"}, {"dim", maps[0].dim()}, {"ergodic", e}};
  }
  if (command == "mixing-set") return run_mixing_set(payload, summary);
  if (command == "mixing-pair") {
    auto maps = parse_matrices(payload, 2);
    if (maps.size() != 2) throw parse_error("mixing-pair takes exactly two matrices");
    auto witness = mixing::pair_quotient_witness(maps[0], maps[1],
                                                 engine_options(options_of(payload)));
    json out{{"command", "mixing-pair"}, {"dim", maps[0].dim()}};
    if (witness) {
      out["verdict"] = "not_mixing";
      out["quotient_witness"] =
          json{{"exponent", witness->exponent}, {"sublattice", tuple_json(witness->sublattice)}};
      summary = "not mixing; quotient witness at exponent " + std::to_string(witness->exponent);
    } else {
      out["verdict"] = "mixing";
      out["quotient_witness"] = json();
      summary = "mixing";
    }
    return out;
  }
  if (command == "commuting") {
    auto maps = parse_matrices(payload, 2);
    if (maps.size() != 2) throw parse_error("commuting takes exactly two matrices");
    bool m = mixing::commuting_pair_criterion(maps[0], maps[1]);
    summary = m ? "commuting pair mixing" : "commuting pair not mixing";
    return json{{"command", "commuting"}, {"dim", maps[0].dim()}, {"pair_mixing", m}};
  }
  if (command == "joint") {
    auto maps = parse_matrices(payload, 1);
    mixing::EpiSet f(maps);
    bool jm = mixing::jointly_mixing(f, engine_options(options_of(payload)));
    summary = jm ? "jointly mixing" : "not jointly mixing";
    return json{{"command", "joint"}, {"dim", f.dim()}, {"maps", f.size()},
                {"jointly_mixing", jm}};
  }
  if (command == "limit") return run_limit(payload, summary);
  if (command == "group-scan") return run_group_scan(payload, summary);
  if (command == "orbit-scan") {
    auto maps = parse_matrices(payload, 1);
    mixing::EpiSet gens(maps);
    json opts = options_of(payload);
    if (!opts.contains("character")) throw parse_error("orbit-scan needs options.character");
    IntVec chi = parse_vector(opts.at("character"));
    std::size_t cap = option_or<std::size_t>(opts, "cap", 10000);
    groups::OrbitScanReport report = groups::dual_orbit_scan(gens, chi, cap);
    json out{{"command", "orbit-scan"}, {"dim", gens.dim()}, {"cap", cap}};
    if (std::holds_alternative<groups::FiniteOrbit>(report)) {
      const auto& orbit = std::get<groups::FiniteOrbit>(report).orbit;
      out["result"] = "finite_orbit";
      out["orbit"] = tuple_json(orbit);
      summary = "finite orbit of size " + std::to_string(orbit.size());
    } else {
      out["result"] = "exceeds_cap";
      summary = "orbit exceeds cap";
    }
    return out;
  }
  if (command == "gen-example") return run_gen_example(payload, summary);
  if (command == "oracle-search") return run_oracle_search(payload, summary);
  if (command == "oracle-mc") return run_oracle_mc(payload, summary);
  if (command == "verify-cert") return run_verify_cert(payload, summary);
  throw parse_error("unknown command: " + command);
}

}  // namespace

const std::vector<std::string>& commands() {
  static const std::vector<std::string> kCommands{
      "ergodic",    "mixing-set", "mixing-pair",   "commuting",  "joint",       "limit",
      "group-scan", "orbit-scan", "gen-example",   "oracle-search", "oracle-mc", "verify-cert"};
  return kCommands;
}

RunResult run(const std::string& command, const json& payload) {
  RunResult result;
  try {
    result.report = dispatch(command, payload, result.summary);
    result.exit_code = 0;
  } catch (const parse_error& e) {
    result.exit_code = 2;
    result.report = json{{"error", e.what()}, {"kind", "parse"}};
    result.summary = std::string("parse error: ") + e.what();
  } catch (const json::exception& e) {
    result.exit_code = 2;
    result.report = json{{"error", e.what()}, {"kind", "parse"}};
    result.summary = std::string("parse error: ") + e.what();
  } catch (const std::invalid_argument& e) {
    result.exit_code = 3;
    result.report = json{{"error", e.what()}, {"kind", "contract"}};
    result.summary = std::string("contract violation: ") + e.what();
  } catch (const std::exception& e) {
    result.exit_code = 1;
    result.report = json{{"error", e.what()}, {"kind", "internal"}};
    result.summary = std::string("internal error: ") + e.what();
  }
  return result;
}

}  // namespace mixshape::cli
