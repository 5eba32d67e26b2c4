#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "gmcwalk/clock.hpp"
#include "gmcwalk/field.hpp"
#include "gmcwalk/harness.hpp"
#include "gmcwalk/kernels.hpp"
#include "gmcwalk/skorokhod.hpp"

namespace py = pybind11;
using namespace gmcwalk;

namespace {

std::vector<double> first_coordinates(const CadlagPath& p) {
  std::vector<double> out;
  for (const auto& v : p.values()) out.push_back(v[0]);
  return out;
}

py::dict metric_dict(const MetricResult& r) {
  py::dict d;
  d["value"] = r.value;
  d["kind"] = r.kind == MetricKind::exact ? "exact" : "upper_bound";
  d["warp"] = r.warp;
  d["refinement_change"] = r.refinement_change;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "gmcwalk core bindings";

  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", error.ptr());
  py::register_exception<DomainError>(m, "DomainError", error.ptr());
  py::register_exception<NotSamplable>(m, "NotSamplable", error.ptr());
  py::register_exception<DiagonalDivergence>(m, "DiagonalDivergence", error.ptr());

  py::class_<KernelSpec>(m, "KernelSpec")
      .def_static("bm2d", &KernelSpec::bm2d, py::arg("lam"))
      .def_static("cauchy1d", &KernelSpec::cauchy1d, py::arg("lam"))
      .def_static("stable1d", &KernelSpec::stable1d, py::arg("alpha"), py::arg("lam"))
      .def_static("lattice_rw", &KernelSpec::lattice_rw, py::arg("n"), py::arg("lam"))
      .def_property_readonly("family", [](const KernelSpec& s) { return std::string(to_string(s.family())); })
      .def_property_readonly("dimension", &KernelSpec::dimension)
      .def_property_readonly("lam", &KernelSpec::lambda)
      .def_property_readonly("alpha", &KernelSpec::alpha)
      .def_property_readonly("scale", &KernelSpec::scale)
      .def_property_readonly("strongly_recurrent", &KernelSpec::strongly_recurrent);

  m.def("heat_kernel", &heat_kernel, py::arg("spec"), py::arg("t"), py::arg("x"), py::arg("y"));
  m.def("stable_density", &stable_density, py::arg("alpha"), py::arg("t"), py::arg("r"));
  m.def("green_continuum", &green_continuum, py::arg("spec"), py::arg("x"), py::arg("y"));
  m.def("log_remainder", &log_remainder, py::arg("spec"), py::arg("r"));
  m.def("green_stable", &green_stable, py::arg("alpha"), py::arg("lam"), py::arg("r"));
  m.def(
      "green_lattice",
      [](int n, double lambda, const Point& x, const Point& y, double tol) {
        const auto r = green_lattice(n, lambda, x, y, tol);
        return py::make_tuple(r.value, r.tail_bound, r.terms);
      },
      py::arg("n"), py::arg("lam"), py::arg("x"), py::arg("y"), py::arg("tol") = 1e-12,
      "Returns (value, tail_bound, terms).");
  m.def(
      "lattice_snap",
      [](int n, const Point& x) {
        const Site s = lattice_snap(n, x);
        return py::make_tuple(s.i, s.j);
      },
      py::arg("n"), py::arg("x"));

  py::class_<LatticeWindow>(m, "LatticeWindow")
      .def_static(
          "rectangle",
          [](int n, std::pair<std::int64_t, std::int64_t> lo, std::pair<std::int64_t, std::int64_t> hi) {
            return LatticeWindow::rectangle(n, {lo.first, lo.second}, {hi.first, hi.second});
          },
          py::arg("n"), py::arg("lo"), py::arg("hi"))
      .def_static("grid1d", &LatticeWindow::grid1d, py::arg("h"), py::arg("lo"), py::arg("hi"))
      .def_property_readonly("size", &LatticeWindow::size)
      .def_property_readonly("cell_mass", &LatticeWindow::cell_mass)
      .def_property_readonly("dimension", &LatticeWindow::dimension)
      .def("position", &LatticeWindow::position)
      .def("__len__", &LatticeWindow::size);

  m.def("build_covariance", py::overload_cast<const LatticeWindow&, const KernelSpec&>(&build_covariance),
        py::arg("window"), py::arg("spec"));
  m.def(
      "sample_field",
      [](const LatticeWindow& w, const KernelSpec& spec, std::uint64_t seed, std::size_t count) {
        const auto factor = factorize(build_covariance(w, spec));
        RngStream rng(seed);
        const auto samples = sample_field(factor, w, rng, count);
        Eigen::MatrixXd out(static_cast<Eigen::Index>(count), static_cast<Eigen::Index>(w.size()));
        for (std::size_t c = 0; c < count; ++c)
          for (std::size_t i = 0; i < w.size(); ++i) out(c, i) = samples[c].value[i];
        return out;
      },
      py::arg("window"), py::arg("spec"), py::arg("seed"), py::arg("count") = 1,
      "Array of shape (count, window.size) of field samples.");

  py::class_<CadlagPath>(m, "CadlagPath")
      .def(py::init([](double horizon, std::vector<double> times, const std::vector<double>& values) {
             return CadlagPath::scalar(horizon, std::move(times), values);
           }),
           py::arg("horizon"), py::arg("times"), py::arg("values"))
      .def_property_readonly("horizon", &CadlagPath::horizon)
      .def_property_readonly("dimension", &CadlagPath::dimension)
      .def_property_readonly("times", &CadlagPath::times)
      .def_property_readonly("values", &CadlagPath::values)
      .def_property_readonly("scalar_values", &first_coordinates)
      .def("at", &CadlagPath::at, py::arg("t"))
      .def("jump_count", &CadlagPath::jump_count)
      .def("__eq__", [](const CadlagPath& a, const CadlagPath& b) { return a == b; });

  m.def(
      "simulate_rw",
      [](int n, const Point& x, double horizon, std::uint64_t seed) {
        RngStream rng(seed);
        return simulate_rw(n, x, horizon, rng);
      },
      py::arg("n"), py::arg("x"), py::arg("horizon"), py::arg("seed"));
  m.def(
      "simulate_stable",
      [](double alpha, double x, double horizon, double dt, std::uint64_t seed) {
        RngStream rng(seed);
        return simulate_stable(alpha, x, horizon, dt, rng);
      },
      py::arg("alpha"), py::arg("x"), py::arg("horizon"), py::arg("dt"), py::arg("seed"));
  m.def(
      "simulate_flip",
      [](double x, double horizon, std::uint64_t seed) {
        RngStream rng(seed);
        return simulate_flip(x, horizon, rng);
      },
      py::arg("x"), py::arg("horizon"), py::arg("seed"));

  py::class_<Clock>(m, "Clock")
      .def(py::init<std::vector<double>, std::vector<double>>(), py::arg("times"), py::arg("values"))
      .def_property_readonly("times", &Clock::times)
      .def_property_readonly("values", &Clock::values)
      .def_property_readonly("total", &Clock::total)
      .def("at", &Clock::at, py::arg("t"));
  m.def("pcaf_from_density", &pcaf_from_density, py::arg("path"), py::arg("density"));
  m.def(
      "clock_inverse",
      [](const Clock& c, double t) {
        const auto r = clock_inverse(c, t);
        return py::make_tuple(r.time, r.saturated);
      },
      py::arg("clock"), py::arg("t"), "Returns (time, saturated).");
  m.def("time_change", &time_change, py::arg("path"), py::arg("clock"));

  m.def("osc_v", &osc_v, py::arg("path"), py::arg("horizon"), py::arg("t"), py::arg("delta"));
  m.def("osc_w", &osc_w, py::arg("path"), py::arg("horizon"), py::arg("delta"));
  m.def("d_j1", [](const CadlagPath& a, const CadlagPath& b, double T) { return metric_dict(d_j1(a, b, T)); },
        py::arg("a"), py::arg("b"), py::arg("horizon"));
  m.def("d_m1", [](const CadlagPath& a, const CadlagPath& b, double T) { return metric_dict(d_m1(a, b, T)); },
        py::arg("a"), py::arg("b"), py::arg("horizon"));
  m.def("l1_distance", &l1_distance, py::arg("a"), py::arg("b"), py::arg("horizon"));

  m.def("experiments", [] {
    std::vector<std::string> names;
    for (const auto& [name, fn] : harness::registry()) names.push_back(name);
    return names;
  });
  m.def(
      "run",
      [](const std::string& experiment, std::uint64_t seed, const std::filesystem::path& out,
         std::optional<std::filesystem::path> config) {
        const auto cfg = config ? harness::Config::load(*config) : harness::Config::defaults();
        harness::RunOptions options;
        options.experiment = experiment;
        options.seed = seed;
        options.out_dir = out;
        harness::RunReport report;
        {
          py::gil_scoped_release release;
          report = harness::run(cfg, options);
        }
        const auto json = py::module_::import("json");
        return json.attr("loads")(harness::summary_json(report.results, report.config_hash));
      },
      py::arg("experiment"), py::arg("seed"), py::arg("out"), py::arg("config") = py::none(),
      "Run an experiment (or 'all'); returns the run summary as a dict.");
}
