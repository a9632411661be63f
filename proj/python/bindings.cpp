#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "muskat/diagnostics.hpp"
#include "muskat/error.hpp"
#include "muskat/lemma.hpp"
#include "muskat/scenario.hpp"

namespace py = pybind11;
using namespace muskat;

namespace {

py::array_t<double> to_array(std::span<const double> v) {
  py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

std::vector<double> to_vector(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
  if (a.ndim() != 1) throw InvalidArgument("expected a one-dimensional array");
  return {a.data(), a.data() + a.size()};
}

}  // namespace

PYBIND11_MODULE(_muskat, m) {
  m.doc() = "Periodic Muskat interface simulator and lemma checks";

  auto base = py::register_exception<Error>(m, "MuskatError", PyExc_RuntimeError);
  py::register_exception<InvalidArgument>(m, "InvalidArgument", base.ptr());
  py::register_exception<NotAGraph>(m, "NotAGraph", base.ptr());
  py::register_exception<ArcChordFailure>(m, "ArcChordFailure", base.ptr());
  py::register_exception<PreconditionViolated>(m, "PreconditionViolated", base.ptr());
  py::register_exception<QuadratureNotConverged>(m, "QuadratureNotConverged", base.ptr());
  py::register_exception<NumericalFailure>(m, "NumericalFailure", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());

  py::class_<FilterSpec>(m, "FilterSpec")
      .def(py::init<>())
      .def(py::init([](double s, int e) { return FilterSpec{s, e}; }), py::arg("strength"),
           py::arg("exponent"))
      .def_readwrite("strength", &FilterSpec::strength)
      .def_readwrite("exponent", &FilterSpec::exponent)
      .def("__call__", &FilterSpec::operator(), py::arg("k"), py::arg("n"))
      .def_static("none", &FilterSpec::none);

  py::class_<Grid>(m, "Grid")
      .def(py::init<std::size_t>(), py::arg("n"))
      .def_property_readonly("n", &Grid::size)
      .def_property_readonly("h", &Grid::spacing)
      .def("nodes", [](const Grid& g) { return to_array(g.nodes()); });
  m.def("make_grid", &make_grid, py::arg("n"));

  py::class_<SampledCurve>(m, "SampledCurve")
      .def(py::init([](const Grid& g, py::array_t<double> p1, py::array_t<double> z2) {
             return SampledCurve(g, to_vector(p1), to_vector(z2));
           }),
           py::arg("grid"), py::arg("p1"), py::arg("z2"))
      .def_property_readonly("grid", &SampledCurve::grid)
      .def_property_readonly("p1", [](const SampledCurve& c) { return to_array(c.p1()); })
      .def_property_readonly("z2", [](const SampledCurve& c) { return to_array(c.z2()); })
      .def_property_readonly("z1", [](const SampledCurve& c) { return to_array(c.z1()); })
      .def("dz1", [](const SampledCurve& c, const FilterSpec& f) { return to_array(c.dz1(f)); },
           py::arg("filter") = FilterSpec{})
      .def("dz2", [](const SampledCurve& c, const FilterSpec& f) { return to_array(c.dz2(f)); },
           py::arg("filter") = FilterSpec{});

  m.def("sample_preset",
        [](const std::string& name, const Grid& g) { return sample_preset(name, g); },
        py::arg("name"), py::arg("grid"));
  m.def("min_dz1",
        [](const SampledCurve& c) {
          const auto s = min_dz1(c);
          return py::make_tuple(s.value, s.index);
        },
        py::arg("curve"));

  py::class_<GraphView>(m, "GraphView")
      .def_property_readonly("x", [](const GraphView& g) { return to_array(g.x); })
      .def_property_readonly("f", [](const GraphView& g) { return to_array(g.f); })
      .def_property_readonly("slope", [](const GraphView& g) { return to_array(g.slope); });
  m.def("to_graph", [](const SampledCurve& c) { return to_graph(c); }, py::arg("curve"));

  py::class_<PhysicalParams>(m, "PhysicalParams")
      .def(py::init<double>(), py::arg("density_jump"))
      .def_property_readonly("density_jump", &PhysicalParams::density_jump)
      .def_property_readonly("gravity", &PhysicalParams::gravity)
      .def_property_readonly("prefactor", &PhysicalParams::prefactor);

  m.def("analyze",
        [](py::array_t<double> v) {
          const auto values = to_vector(v);
          const Spectrum s = analyze(values);
          py::array_t<std::complex<double>> out(static_cast<py::ssize_t>(s.size()));
          std::copy(s.coeffs().begin(), s.coeffs().end(), out.mutable_data());
          return py::make_tuple(s.min_k(), out);
        },
        py::arg("values"), "Returns (k_min, coefficients for k = k_min .. n/2).");
  m.def("filtered_derivative",
        [](py::array_t<double> v, int order, const FilterSpec& f) {
          return to_array(filtered_derivative(to_vector(v), order, f));
        },
        py::arg("values"), py::arg("order"), py::arg("filter") = FilterSpec{});
  m.def("threshold_smooth",
        [](py::array_t<double> v, double eps) {
          return to_array(threshold_smooth(to_vector(v), eps));
        },
        py::arg("values"), py::arg("eps"));

  m.def("periodic_rhs",
        [](const SampledCurve& c, const PhysicalParams& p) {
          const auto v = periodic_rhs(c, p);
          return py::make_tuple(to_array(v.v1), to_array(v.v2));
        },
        py::arg("curve"), py::arg("params"));
  m.def("rt_profile",
        [](const SampledCurve& c, const PhysicalParams& p) { return to_array(rt_profile(c, p)); },
        py::arg("curve"), py::arg("params"));
  m.def("turnover_predictor",
        [](const SampledCurve& c, double a0, double tol) {
          return turnover_predictor(SpectralCurve(c), a0, tol);
        },
        py::arg("curve"), py::arg("alpha0"), py::arg("quad_tol") = 1e-10);

  py::class_<StepControl> sc(m, "StepControl");
  py::enum_<StepControl::Mode>(sc, "Mode")
      .value("FIXED", StepControl::Mode::Fixed)
      .value("ADAPTIVE", StepControl::Mode::Adaptive);
  sc.def(py::init<>())
      .def_readwrite("mode", &StepControl::mode)
      .def_readwrite("dt", &StepControl::dt)
      .def_readwrite("rel_tol", &StepControl::rel_tol)
      .def_readwrite("abs_tol", &StepControl::abs_tol)
      .def_readwrite("max_dt", &StepControl::max_dt)
      .def_readwrite("min_dt", &StepControl::min_dt);

  m.def("rk45_step",
        [](const SampledCurve& c, const PhysicalParams& p, double dt) {
          auto r = rk45_step(c, p, dt);
          return py::make_tuple(r.curve, r.error_estimate);
        },
        py::arg("curve"), py::arg("params"), py::arg("dt"));

  py::class_<Event>(m, "Event")
      .def_readonly("time", &Event::time)
      .def_property_readonly("kind", [](const Event& e) { return to_string(e.kind); })
      .def_readonly("detail", &Event::detail)
      .def("__repr__", [](const Event& e) {
        return "Event(" + to_string(e.kind) + " @ " + std::to_string(e.time) + ")";
      });

  py::class_<Trajectory>(m, "Trajectory")
      .def_property_readonly("times", [](const Trajectory& t) { return to_array(t.times); })
      .def_readonly("snapshots", &Trajectory::snapshots)
      .def_readonly("events", &Trajectory::events)
      .def("failed", &Trajectory::failed);

  m.def("evolve_forward",
        [](const SampledCurve& c, const PhysicalParams& p, double t_end, const StepControl& s,
           double every, double t_start, bool stop_on_unstable) {
          ForwardOptions o;
          o.t_start = t_start;
          o.stop_on_unstable = stop_on_unstable;
          return evolve_forward(c, p, t_end, s, every, o);
        },
        py::arg("curve"), py::arg("params"), py::arg("t_end"), py::arg("control") = StepControl{},
        py::arg("snapshot_every") = 1e-2, py::arg("t_start") = 0.0,
        py::arg("stop_on_unstable") = false);
  m.def("evolve_backward_regularized",
        [](const SampledCurve& c, const PhysicalParams& p, double t_final, double dt, double eps,
           double every) {
          BackwardOptions o;
          o.snapshot_every = every;
          return evolve_backward_regularized(c, p, t_final, dt, eps, o);
        },
        py::arg("curve"), py::arg("params"), py::arg("t_final"), py::arg("dt") = 4e-5,
        py::arg("eps") = 0.0, py::arg("snapshot_every") = 1.2e-2);
  m.def("detect_event_times", &detect_event_times, py::arg("trajectory"),
        py::arg("time_tol") = 1e-8);

  py::class_<CurveSample>(m, "CurveSample")
      .def_readonly("alpha", &CurveSample::alpha)
      .def_readonly("z1", &CurveSample::z1)
      .def_readonly("z2", &CurveSample::z2)
      .def_readonly("slope", &CurveSample::slope);
  py::class_<TurningReport>(m, "TurningReport")
      .def_readonly("min_slope", &TurningReport::min_slope)
      .def_readonly("argmin", &TurningReport::argmin)
      .def_property_readonly("regime", [](const TurningReport& r) { return to_string(r.regime); })
      .def_readonly("tangent_points", &TurningReport::tangent_points)
      .def_readonly("slope_minima", &TurningReport::slope_minima);
  m.def("turning_report",
        [](const SampledCurve& c, double slope_tol) {
          TurningOptions o;
          o.slope_tol = slope_tol;
          return turning_report(c, o);
        },
        py::arg("curve"), py::arg("slope_tol") = 1e-10);
  m.def("norm_series",
        [](const Trajectory& t) {
          const auto ns = norm_series(t);
          py::dict d;
          d["times"] = to_array(ns.times);
          d["sup_f"] = to_array(ns.sup_f);
          d["sup_slope"] = ns.sup_slope;
          return d;
        },
        py::arg("trajectory"));
  m.def("regime_timeline",
        [](const Trajectory& t, double tol) {
          py::list out;
          for (const auto& iv : regime_timeline(t, tol)) {
            out.append(py::make_tuple(iv.t_begin, iv.t_end, to_string(iv.regime)));
          }
          return out;
        },
        py::arg("trajectory"), py::arg("slope_tol") = 1e-10);

  auto lm = m.def_submodule("lemma", "Building blocks and integral checks");
  lm.def("cc_integrals", [] {
    const auto r = lemma::cc_integrals();
    return py::dict(py::arg("I1") = r.i1, py::arg("I2") = r.i2, py::arg("I3") = r.i3,
                    py::arg("I4") = r.i4, py::arg("sum") = r.sum);
  });
  lm.def("tt_integrals", [] {
    const auto r = lemma::tt_integrals();
    return py::dict(py::arg("I1") = r.i1, py::arg("I2") = r.i2, py::arg("I3") = r.i3,
                    py::arg("lower_bound") = r.lower_bound);
  });
  lm.def("tail_bounds",
         [](double R) {
           const auto b = lemma::tail_bounds(R);
           return py::dict(py::arg("tc") = b.tc, py::arg("ct1") = b.ct1, py::arg("ct2") = b.ct2);
         },
         py::arg("R"));
  lm.def("verify_conditions",
         [](double R) {
           const auto r = lemma::verify_conditions(R);
           return py::dict(py::arg("R") = r.R, py::arg("I_cc") = r.I_cc,
                           py::arg("I_tt_lower") = r.I_tt_lower, py::arg("bound_tc") = r.bound_tc,
                           py::arg("bound_ct1") = r.bound_ct1, py::arg("bound_ct2") = r.bound_ct2,
                           py::arg("center_ok") = r.center_ok, py::arg("tail_ok") = r.tail_ok);
         },
         py::arg("R"));
  lm.def("min_admissible_R", &lemma::min_admissible_R);
  lm.def("predictor_crosscheck",
         [](double R, double tol) {
           const auto x = lemma::predictor_crosscheck(R, tol);
           return py::dict(py::arg("at_center") = x.at_center, py::arg("at_tail") = x.at_tail,
                           py::arg("center_partwise") = x.center_partwise,
                           py::arg("tail_partwise") = x.tail_partwise, py::arg("I_tc") = x.I_tc,
                           py::arg("I_tt") = x.I_tt, py::arg("I_ct1") = x.I_ct1,
                           py::arg("I_ct2") = x.I_ct2);
         },
         py::arg("R"), py::arg("quad_tol") = 1e-10);
  lm.def("verification_report", &lemma::verification_report, py::arg("R") = 18.0,
         py::arg("quad_tol") = 1e-10);

  m.def("parse_config", &parse_config, py::arg("text"));
  m.def("load_config", &load_config, py::arg("path"));
  py::class_<RunConfig>(m, "RunConfig")
      .def_property_readonly("scenario", [](const RunConfig& c) { return to_string(c.scenario); })
      .def_readwrite("n", &RunConfig::n)
      .def_readwrite("density_jump", &RunConfig::density_jump)
      .def_readwrite("eps", &RunConfig::eps)
      .def_readwrite("snapshot_every", &RunConfig::snapshot_every)
      .def_readwrite("out", &RunConfig::out)
      .def_property_readonly("t_final", &RunConfig::resolved_t_final)
      .def_property_readonly("dt", [](const RunConfig& c) { return c.step.dt; })
      .def("to_json", [](const RunConfig& c) { return config_to_json(c); });
  m.def("run_scenario",
        [](const RunConfig& c) {
          RunManifest man;
          {
            py::gil_scoped_release release;
            man = run_scenario(c);
          }
          return py::module_::import("json").attr("loads")(man.to_json());
        },
        py::arg("config"), "Runs the scenario and returns the manifest as a dict.");
  m.def("export_snapshot",
        [](const SampledCurve& c, double t, const std::filesystem::path& p) {
          export_snapshot(c, t, p);
        },
        py::arg("curve"), py::arg("time"), py::arg("path"));
  m.def("import_snapshot",
        [](const std::filesystem::path& p) {
          auto s = import_snapshot(p);
          return py::make_tuple(s.curve, s.time);
        },
        py::arg("path"));
  m.attr("__version__") = library_version();
}
