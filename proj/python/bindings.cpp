#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "smlat/compound.hpp"
#include "smlat/deferred_acceptance.hpp"
#include "smlat/error.hpp"
#include "smlat/lp.hpp"
#include "smlat/multiroom.hpp"
#include "smlat/oracle.hpp"
#include "smlat/rotations.hpp"
#include "smlat/sublattice.hpp"
#include "smlat/verify.hpp"

namespace py = pybind11;
using namespace smlat;

namespace {

// Matchings cross the boundary as lists of 0-based firm ids, one per worker.
std::vector<int> firms(const Matching& m) { return m.firms(); }

std::optional<std::vector<int>> firms(const std::optional<Matching>& m) {
  if (!m) return std::nullopt;
  return m->firms();
}

std::vector<std::vector<int>> all_firms(const std::vector<Matching>& ms) {
  std::vector<std::vector<int>> out;
  for (const auto& m : ms) out.push_back(m.firms());
  return out;
}

py::object outcome(const MultiRoomOutcome& o) {
  if (o.is_matched()) return py::cast(o.matching().firms());
  return py::str(to_string(o.kind()));
}

Rational parse_rational(const std::string& text) {
  Rational r;
  if (r.set_str(text, 10) != 0) throw ValidationError("not a rational: " + text);
  r.canonicalize();
  return r;
}

}  // namespace

PYBIND11_MODULE(_smlat, m) {
  m.doc() = "Stable matchings shared by nearby instances";

  py::register_exception<Error>(m, "Error");

  py::class_<Instance>(m, "Instance")
      .def(py::init<std::vector<PreferenceList>, std::vector<PreferenceList>, std::string>(), py::arg("workers"),
           py::arg("firms"), py::arg("name") = "")
      .def_static("parse", [](const std::string& text) { return parse_instance_text(text); })
      .def_static("load", [](const std::string& path) { return load_instance(path); })
      .def("serialize", [](const Instance& i) { return serialize(i); })
      .def_property_readonly("size", &Instance::size)
      .def_property_readonly("name", &Instance::name)
      .def_property_readonly("workers", &Instance::worker_lists)
      .def_property_readonly("firms", &Instance::firm_lists)
      .def("transposed", &Instance::transposed)
      .def(py::self == py::self)
      .def("__repr__", [](const Instance& i) { return "<Instance n=" + std::to_string(i.size()) + ">"; });

  m.def("is_stable", [](const Instance& i, const std::vector<int>& m) { return is_stable(i, Matching(m)); });
  m.def("blocking_pairs", [](const Instance& i, const std::vector<int>& m) {
    std::vector<std::pair<int, int>> out;
    for (const Pair& p : blocking_pairs(i, Matching(m))) out.emplace_back(p.worker, p.firm);
    return out;
  });
  m.def("worker_optimal", [](const Instance& i) { return firms(worker_da(i)); });
  m.def("firm_optimal", [](const Instance& i) { return firms(firm_da(i)); });
  m.def("stable_matchings", [](const Instance& i) { return all_firms(enumerate_lattice(build_rotation_poset(i))); },
        "Every stable matching, from the rotation poset");
  m.def("rotation_poset", [](const Instance& i) { return export_poset(build_rotation_poset(i)); });
  m.def("stable_under_all", [](const std::vector<Instance>& family) {
    return all_firms(stable_intersection_bruteforce(family));
  }, "Brute-force reference: matchings stable under every instance");

  m.def("compound_worker_optimal", [](const std::vector<Instance>& family) {
    return firms(worker_optimal_compound(build_compound(family)));
  });
  m.def("compound_firm_optimal", [](const std::vector<Instance>& family) {
    return firms(firm_optimal_compound(build_compound(family)));
  });
  m.def("multiroom_worker_optimal", [](const std::vector<Instance>& family, bool research) {
    return outcome(worker_optimal_multiroom(family, research ? MultiRoomMode::research : MultiRoomMode::checked));
  }, py::arg("family"), py::arg("research") = false);
  m.def("multiroom_firm_optimal", [](const std::vector<Instance>& family, bool research) {
    return outcome(firm_optimal_multiroom(family, research ? MultiRoomMode::research : MultiRoomMode::checked));
  }, py::arg("family"), py::arg("research") = false);

  m.def("solve_lp", [](const std::vector<Instance>& family) -> py::object {
    const auto x = solve_feasible(build_lp(family));
    if (!x) return py::none();
    py::list rows;
    for (int w = 0; w < x->size(); ++w) {
      py::list row;
      for (int f = 0; f < x->size(); ++f) row.append(x->at(w, f).get_str());
      rows.append(row);
    }
    return rows;
  }, "Exact feasible point as rows of rational strings, or None");
  m.def("theta_round", [](const std::vector<Instance>& family, const Instance& under, const std::string& theta) {
    const auto x = solve_feasible(build_lp(family));
    if (!x) throw ValidationError("joint model is infeasible");
    return firms(theta_round(*x, under, parse_rational(theta)));
  });

  m.def("worked_examples", [](const std::string& dir) {
    return run_worked_examples(dir.empty() ? default_fixture_dir() : std::filesystem::path(dir)).to_json();
  }, py::arg("fixtures") = "");
  m.def("fuzz", [](int n, int trials, int p, int q, int instances, std::uint64_t seed) {
    return run_fuzz(FuzzConfig{n, trials, p, q, instances, seed}).to_json();
  }, py::arg("n") = 5, py::arg("trials") = 50, py::arg("p") = 0, py::arg("q") = 2, py::arg("instances") = 2,
     py::arg("seed") = 1);
}
