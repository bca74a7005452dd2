#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "varexp/atoms.hpp"
#include "varexp/error.hpp"
#include "varexp/exponent.hpp"
#include "varexp/fractional.hpp"
#include "varexp/grid.hpp"
#include "varexp/harness.hpp"
#include "varexp/maximal.hpp"
#include "varexp/norms.hpp"
#include "varexp/serialize.hpp"

namespace py = pybind11;
using namespace varexp;

namespace {

py::array_t<double> as_array(std::span<const double> v) {
  py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

py::dict report_dict(const InequalityReport& r) {
  py::dict d;
  d["name"] = r.name;
  d["lhs"] = r.lhs;
  d["rhs"] = r.rhs;
  d["ratio"] = r.ratio;
  d["degenerate"] = r.degenerate;
  d["config"] = r.config.dump();
  return d;
}

std::vector<Point> as_points(const std::vector<double>& xs) {
  std::vector<Point> out;
  for (double x : xs) out.push_back({x});
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Variable-exponent norms, maximal operators, atoms and multilinear fractional integrals";

  py::register_exception<Error>(m, "VarexpError", PyExc_ValueError);

  py::class_<Grid>(m, "Grid")
      .def_static("over_box", &Grid::over_box, py::arg("lo"), py::arg("hi"), py::arg("h"))
      .def_property_readonly("dim", &Grid::dim)
      .def_property_readonly("size", &Grid::size)
      .def_property_readonly("h", &Grid::h)
      .def_property_readonly("lo", &Grid::lo)
      .def_property_readonly("hi", &Grid::hi)
      .def_property_readonly("shape", &Grid::shape)
      .def("midpoint", py::overload_cast<std::size_t>(&Grid::midpoint, py::const_))
      .def("__repr__", [](const Grid& g) {
        return "<Grid dim=" + std::to_string(g.dim()) + " size=" + std::to_string(g.size()) + ">";
      });

  py::class_<GridFunction>(m, "GridFunction")
      .def(py::init([](const Grid& g, const std::vector<double>& v) { return GridFunction(g, v); }),
           py::arg("grid"), py::arg("values"))
      .def_property_readonly("grid", &GridFunction::grid)
      .def_property_readonly("values",
                             [](const GridFunction& f) { return as_array(f.values()); })
      .def("at", [](const GridFunction& f, const Point& x) { return f.at(x); })
      .def("sup_abs", &GridFunction::sup_abs)
      .def("__len__", &GridFunction::size);

  py::class_<Cube>(m, "Cube")
      .def(py::init<Point, double>(), py::arg("center"), py::arg("side"))
      .def_property_readonly("center", &Cube::center)
      .def_property_readonly("side", &Cube::side)
      .def("contains", [](const Cube& q, const Point& x) { return q.contains(x); });

  py::class_<ExponentField>(m, "ExponentField")
      .def(py::init<Point, Point, std::vector<std::size_t>, std::vector<double>, double>(),
           py::arg("lo"), py::arg("hi"), py::arg("shape"), py::arg("samples"), py::arg("p_inf"))
      .def_static("constant", &ExponentField::constant, py::arg("n"), py::arg("value"))
      .def("__call__", [](const ExponentField& p, const Point& x) { return p(x); })
      .def_property_readonly("p_minus", &ExponentField::p_minus)
      .def_property_readonly("p_plus", &ExponentField::p_plus)
      .def_property_readonly("p_inf", &ExponentField::p_inf)
      .def_property_readonly("samples", &ExponentField::samples);

  m.def("modular", [](const GridFunction& f, const ExponentField& p) { return modular(f, p).value; });
  m.def("luxemburg_norm",
        py::overload_cast<const GridFunction&, const ExponentField&>(&luxemburg_norm));
  m.def("holder_constant", &holder_constant);
  m.def("holder_pair_check", [](const GridFunction& f, const GridFunction& g,
                                const ExponentField& p) { return report_dict(holder_pair_check(f, g, p)); });
  m.def("duality_witness", &duality_witness);
  m.def("generalized_holder_check",
        [](const std::vector<GridFunction>& fs, const std::vector<ExponentField>& ps) {
          return report_dict(generalized_holder_check(fs, ps));
        });
  m.def("bmo_norm", py::overload_cast<const GridFunction&>(&bmo_norm));
  m.def("check_log_holder", [](const ExponentField& p, double threshold) {
    const auto r = check_log_holder(p, threshold);
    py::dict d;
    d["c_local"] = r.c_local;
    d["c_decay"] = r.c_decay;
    d["pass"] = r.pass;
    return d;
  }, py::arg("p"), py::arg("threshold") = 100.0);

  m.def("frac_maximal", [](const GridFunction& f, double alpha, bool centered) {
    return frac_maximal(f, MaximalConfig::dyadic(f.grid(), alpha, centered));
  }, py::arg("f"), py::arg("alpha") = 0.0, py::arg("centered") = false);
  m.def("claim_check", [](const Point& y, double r, double alpha, const std::vector<Point>& xs,
                          double h) { return report_dict(claim_check(y, r, alpha, xs, h)); });

  m.def("make_atom", [](const Grid& g, const Cube& q, int d, std::uint64_t seed) {
    const Atom a = make_atom(g, q, d, seed);
    return py::make_tuple(a.values, a.certificate.max_moment_residual());
  }, py::arg("grid"), py::arg("cube"), py::arg("d"), py::arg("seed"));
  m.def("make_b_atom", [](const Grid& g, const Cube& q, int d, const GridFunction& b,
                          const ExponentField& p, std::uint64_t seed) {
    const Atom a = make_b_atom(g, q, d, b, p, seed);
    return py::make_tuple(a.values, a.certificate.max_moment_residual(),
                          a.certificate.max_b_moment_residual());
  }, py::arg("grid"), py::arg("cube"), py::arg("d"), py::arg("b"), py::arg("p"), py::arg("seed"));

  m.def("kernel", [](const std::vector<double>& y, std::size_t m_, std::size_t n, double alpha) {
    return kernel(y, KernelParams{m_, n, alpha});
  }, py::arg("y"), py::arg("m"), py::arg("n"), py::arg("alpha"));
  m.def("apply_Ialpha", [](const std::vector<GridFunction>& fs, double alpha,
                           const std::vector<double>& xs) {
    const KernelParams kp{fs.size(), fs.at(0).grid().dim(), alpha};
    return apply_Ialpha(fs, kp, as_points(xs));
  }, py::arg("fs"), py::arg("alpha"), py::arg("xs"),
     "I_alpha(f_1..f_m) at one-dimensional points xs.");
  m.def("apply_commutator", [](const GridFunction& b, const std::vector<GridFunction>& fs,
                               std::size_t j, double alpha, const std::vector<double>& xs) {
    const KernelParams kp{fs.size(), fs.at(0).grid().dim(), alpha};
    return apply_commutator(b, fs, j, kp, as_points(xs));
  }, py::arg("b"), py::arg("fs"), py::arg("j"), py::arg("alpha"), py::arg("xs"));

  m.def("run_scenario_json", [](const std::string& scenario, std::size_t threads) {
    const auto report = run(scenario_from_json(Json::parse(scenario)), RunOptions{threads});
    return to_json(report).dump();
  }, py::arg("scenario"), py::arg("threads") = 1);
  m.def("builtin_suite_json", [] {
    Json all = Json::array();
    for (const auto& s : builtin_suite()) all.push_back(to_json(s));
    return all.dump();
  });

#ifdef VAREXP_VERSION
  m.attr("__version__") = VAREXP_VERSION;
#else
  m.attr("__version__") = "dev";
#endif
}
