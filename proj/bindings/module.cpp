#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <variant>

#include "mixshape/cyclo.hpp"
#include "mixshape/exact.hpp"
#include "mixshape/families.hpp"
#include "mixshape/groups.hpp"
#include "mixshape/job.hpp"
#include "mixshape/limits.hpp"
#include "mixshape/mixing.hpp"
#include "mixshape/oracle.hpp"

namespace py = pybind11;
using namespace mixshape;

namespace {

exact::Int to_int(const py::handle& obj) {
  return exact::Int(py::str(obj).cast<std::string>());
}

py::object from_int(const exact::Int& x) {
  return py::module_::import("builtins").attr("int")(x.get_str());
}

exact::IntMat to_mat(const py::sequence& rows) {
  std::vector<exact::IntVec> r;
  for (const py::handle& row : rows) {
    exact::IntVec v;
    for (const py::handle& e : row.cast<py::sequence>()) v.push_back(to_int(e));
    r.push_back(std::move(v));
  }
  return exact::IntMat::from_rows(r);
}

exact::IntVec to_vec(const py::sequence& entries) {
  exact::IntVec v;
  for (const py::handle& e : entries) v.push_back(to_int(e));
  return v;
}

py::list from_vec(const exact::IntVec& v) {
  py::list out;
  for (const exact::Int& x : v) out.append(from_int(x));
  return out;
}

py::list from_mat(const exact::IntMat& m) {
  py::list out;
  for (std::size_t i = 0; i < m.dim(); ++i) {
    py::list row;
    for (std::size_t j = 0; j < m.dim(); ++j) row.append(from_int(m.at(i, j)));
    out.append(row);
  }
  return out;
}

py::list from_tuple(const std::vector<exact::IntVec>& tuple) {
  py::list out;
  for (const exact::IntVec& v : tuple) out.append(from_vec(v));
  return out;
}

mixing::EpiSet to_episet(const py::sequence& mats) {
  std::vector<exact::IntMat> maps;
  for (const py::handle& m : mats) maps.push_back(to_mat(m.cast<py::sequence>()));
  return mixing::EpiSet(std::move(maps));
}

py::dict verdict_dict(const mixing::MixingVerdict& v) {
  py::dict out;
  if (mixing::is_mixing(v)) {
    out["mixing"] = true;
    out["exponents_checked"] = std::get<mixing::Mixing>(v).exponents_checked;
  } else {
    const auto& nm = std::get<mixing::NotMixing>(v);
    out["mixing"] = false;
    out["exponent"] = nm.exponent;
    out["witness"] = from_tuple(nm.witness);
    out["support"] = nm.support;
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(mixshape, m) {
  m.doc() = "exact mixing and ergodicity decisions for sets of toral epimorphisms";

  m.def("charpoly", [](const py::sequence& mat) {
    exact::IntPoly p = exact::charpoly(to_mat(mat));
    py::list out;
    for (const exact::Int& c : p.coeffs()) out.append(from_int(c));
    return out;
  }, py::arg("matrix"), "coefficients of det(xI - m), ascending degree");

  m.def("euler_phi", &cyclo::euler_phi, py::arg("n"));
  m.def("phi_bounded_orders",
        [](unsigned long bound) { return cyclo::phi_bounded_orders(bound).orders; },
        py::arg("bound"), "all n with phi(n) <= bound");
  m.def("torsion_exponent",
        [](unsigned long d) { return from_int(cyclo::torsion_exponent(d)); }, py::arg("d"));

  m.def("is_ergodic", [](const py::sequence& mat) { return mixing::is_ergodic(to_mat(mat)); },
        py::arg("matrix"));
  m.def("is_mixing_set",
        [](const py::sequence& mats) { return verdict_dict(mixing::is_mixing_set(to_episet(mats))); },
        py::arg("matrices"), "decide mixing of the family; returns a verdict dict");
  m.def("jointly_mixing",
        [](const py::sequence& mats) { return mixing::jointly_mixing(to_episet(mats)); },
        py::arg("matrices"));
  m.def("commuting_pair_criterion",
        [](const py::sequence& a, const py::sequence& b) {
          return mixing::commuting_pair_criterion(to_mat(a), to_mat(b));
        },
        py::arg("t1"), py::arg("t2"));
  m.def("pair_quotient_witness",
        [](const py::sequence& a, const py::sequence& b) -> py::object {
          auto w = mixing::pair_quotient_witness(to_mat(a), to_mat(b));
          if (!w) return py::none();
          py::dict out;
          out["exponent"] = w->exponent;
          out["sublattice"] = from_tuple(w->sublattice);
          return out;
        },
        py::arg("t1"), py::arg("t2"));

  m.def("separating_exponent",
        [](const py::sequence& mats) { return limits::separating_exponent(to_episet(mats)); },
        py::arg("matrices"));
  m.def("character_limit",
        [](const py::sequence& mats, unsigned long l, unsigned long residue, const py::sequence& chars) {
          std::vector<exact::IntVec> cs;
          for (const py::handle& c : chars) cs.push_back(to_vec(c.cast<py::sequence>()));
          return limits::character_limit(to_episet(mats), l, residue, cs);
        },
        py::arg("matrices"), py::arg("modulus"), py::arg("residue"), py::arg("characters"));

  m.def("is_finite_order",
        [](const py::sequence& mat) { return groups::is_finite_order(to_mat(mat)); },
        py::arg("matrix"));
  m.def("conjugate_family",
        [](const py::sequence& gamma, const py::sequence& delta, unsigned count) {
          py::list out;
          for (const exact::IntMat& t : groups::conjugate_family(to_mat(gamma), to_mat(delta), count).maps)
            out.append(from_mat(t));
          return out;
        },
        py::arg("gamma"), py::arg("delta"), py::arg("count"));

  m.def("gen_unipotent_family", [](unsigned d, unsigned s) {
    py::list out;
    for (const exact::IntMat& t : families::gen_unipotent_family(d, s).maps) out.append(from_mat(t));
    return out;
  }, py::arg("d"), py::arg("s"));
  m.def("gen_epi_family", [](unsigned d, unsigned s) {
    py::list out;
    for (const exact::IntMat& t : families::gen_epi_family(d, s).maps) out.append(from_mat(t));
    return out;
  }, py::arg("d"), py::arg("s"));

  m.def("brute_force_relation_search",
        [](const py::sequence& mats, long height, unsigned long horizon, unsigned long min_hits)
            -> py::object {
          auto w = oracle::brute_force_relation_search(to_episet(mats), height, horizon, min_hits);
          if (!w) return py::none();
          return from_tuple(*w);
        },
        py::arg("matrices"), py::arg("height"), py::arg("horizon"), py::arg("min_hits"));
  m.def("verify_witness",
        [](const py::sequence& mats, unsigned long l, const py::sequence& witness, unsigned long depth) {
          std::vector<exact::IntVec> w;
          for (const py::handle& v : witness) w.push_back(to_vec(v.cast<py::sequence>()));
          return oracle::verify_witness(to_episet(mats), l, w, depth);
        },
        py::arg("matrices"), py::arg("exponent"), py::arg("witness"), py::arg("depth"));

  m.def("run_job",
        [](const std::string& command, const std::string& payload_json) {
          cli::RunResult r = cli::run(command, nlohmann::json::parse(payload_json));
          return py::make_tuple(r.exit_code, r.report.dump(2), r.summary);
        },
        py::arg("command"), py::arg("payload_json"),
        "run a CLI job in-process; returns (exit_code, report_json, summary)");
}
