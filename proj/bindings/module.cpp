#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "clsim/classical_solver.hpp"
#include "clsim/ensembles.hpp"
#include "clsim/interp.hpp"
#include "clsim/io.hpp"
#include "clsim/linear_solver.hpp"
#include "clsim/polar.hpp"
#include "clsim/quantization.hpp"
#include "clsim/scenario.hpp"
#include "clsim/trajectories.hpp"

namespace py = pybind11;
using namespace clsim;

namespace {

#define STRINGIFY(x) #x
#define MACRO_STRINGIFY(x) STRINGIFY(x)

template <typename Field>
py::array field_values(const Field& f) {
    const Grid& g = f.grid;
    if (g.dim == 2)
        return py::array(py::array::ShapeContainer{py::ssize_t(g.n[0]), py::ssize_t(g.n[1])},
                         f.v.data());
    return py::array(py::array::ShapeContainer{py::ssize_t(g.n[0])}, f.v.data());
}

template <typename Field, typename T>
void field_set_values(Field& f, py::array_t<T, py::array::c_style | py::array::forcecast> arr) {
    if (std::size_t(arr.size()) != f.size())
        throw ConfigError("value array has " + std::to_string(arr.size()) + " entries, field has " +
                          std::to_string(f.size()));
    std::copy(arr.data(), arr.data() + f.size(), f.v.data());
}

py::array_t<double> grid_coords(const Grid& g, int axis) {
    py::array_t<double> out(py::ssize_t(g.n[std::size_t(axis)]));
    auto* p = out.mutable_data();
    for (std::size_t i = 0; i < g.n[std::size_t(axis)]; ++i) p[i] = g.coord(axis, i);
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "classical and linear wave solvers on periodic grids";

    py::register_exception<ConfigError>(m, "ConfigError");
    py::register_exception<CausticError>(m, "CausticError");
    py::register_exception<NormDriftError>(m, "NormDriftError");
    py::register_exception<SamplingError>(m, "SamplingError");

    py::class_<Grid>(m, "Grid")
        .def(py::init<std::size_t, double, double, double>(), py::arg("n"), py::arg("extent"),
             py::arg("hbar") = 1.0, py::arg("mass") = 1.0)
        .def(py::init<std::size_t, std::size_t, double, double, double, double>(), py::arg("n0"),
             py::arg("n1"), py::arg("extent0"), py::arg("extent1"), py::arg("hbar") = 1.0,
             py::arg("mass") = 1.0)
        .def_readonly("dim", &Grid::dim)
        .def_readonly("n", &Grid::n)
        .def_readonly("extent", &Grid::extent)
        .def_readonly("hbar", &Grid::hbar)
        .def_readonly("mass", &Grid::mass)
        .def("size", &Grid::size)
        .def("spacing", &Grid::spacing, py::arg("axis") = 0)
        .def("cell_volume", &Grid::cell_volume)
        .def("coords", &grid_coords, py::arg("axis") = 0)
        .def("nearest_mode", &Grid::nearest_mode, py::arg("axis"), py::arg("k"))
        .def("__eq__", &Grid::operator==);

    py::class_<ScalarField>(m, "ScalarField")
        .def(py::init<const Grid&>())
        .def_readonly("grid", &ScalarField::grid)
        .def_property("values", &field_values<ScalarField>, &field_set_values<ScalarField, double>)
        .def("size", &ScalarField::size);

    py::class_<ComplexField>(m, "ComplexField")
        .def(py::init<const Grid&>())
        .def_readonly("grid", &ComplexField::grid)
        .def_property("values", &field_values<ComplexField>, &field_set_values<ComplexField, cplx>)
        .def("size", &ComplexField::size);

    m.def("norm", py::overload_cast<const ComplexField&>(&norm));
    m.def("norm", py::overload_cast<const ScalarField&>(&norm));
    m.def("density", &density);
    m.def("mean_coord", &mean_coord, py::arg("rho"), py::arg("axis") = 0);
    m.def("coord_width", &coord_width, py::arg("rho"), py::arg("axis") = 0);
    m.def("packet_width", &packet_width);

    py::class_<ActionField>(m, "ActionField")
        .def(py::init<const Grid&>())
        .def(py::init<const Grid&, std::array<double, 2>>(), py::arg("grid"), py::arg("slope"))
        .def_readwrite("slope", &ActionField::slope)
        .def_readwrite("periodic", &ActionField::periodic)
        .def("total", &ActionField::total);

    py::class_<PolarPair>(m, "PolarPair")
        .def(py::init<>())
        .def(py::init([](ScalarField R, ActionField S) {
                 return PolarPair{std::move(R), std::move(S)};
             }),
             py::arg("R"), py::arg("S"))
        .def_readwrite("R", &PolarPair::R)
        .def_readwrite("S", &PolarPair::S);

    m.def("compose", py::overload_cast<const PolarPair&>(&compose));
    m.def("decompose", [](const ComplexField& psi) {
        const Decomposition d = decompose(psi);
        return std::make_pair(d.pair, d.phase_defined.defined);
    });
    m.def("quantum_potential", [](const ScalarField& R) {
        const MaskedField q = quantum_potential(R);
        return std::make_pair(q.field, q.mask.defined);
    });
    m.def("action_gradient", &action_gradient, py::arg("S"), py::arg("axis") = 0);

    py::class_<Potential>(m, "Potential")
        .def_static("zero", &Potential::zero)
        .def_static("harmonic", &Potential::harmonic, py::arg("grid"), py::arg("omega"),
                    py::arg("flatten_radius") = 0.0)
        .def_static("linear", &Potential::linear, py::arg("grid"), py::arg("force"),
                    py::arg("flatten_radius") = 0.0)
        .def_static("sampled", &Potential::sampled)
        .def("value", &Potential::value, py::arg("x"), py::arg("t") = 0.0);

    py::class_<ObservationLog>(m, "ObservationLog")
        .def_readonly("columns", &ObservationLog::columns)
        .def_readonly("times", &ObservationLog::times)
        .def_readonly("rows", &ObservationLog::rows)
        .def("column", &ObservationLog::column);

    py::class_<DensityFrames>(m, "DensityFrames")
        .def_readonly("times", &DensityFrames::times)
        .def("count", &DensityFrames::count)
        .def("rho", [](const DensityFrames& f, std::size_t k) { return f.rho.at(k); });

    py::class_<VelocityFrames>(m, "VelocityFrames")
        .def_readonly("times", &VelocityFrames::times)
        .def_readonly("any_masked", &VelocityFrames::any_masked)
        .def("count", &VelocityFrames::count)
        .def("component",
             [](const VelocityFrames& f, std::size_t k, int axis) {
                 return f.comp.at(k).at(std::size_t(axis));
             },
             py::arg("frame"), py::arg("axis") = 0);

    py::class_<RunRecord>(m, "RunRecord")
        .def_readonly("log", &RunRecord::log)
        .def_readonly("density", &RunRecord::density)
        .def_readonly("velocity", &RunRecord::velocity)
        .def_readonly("snapshots", &RunRecord::snapshots);

    py::class_<EvolveOptions>(m, "EvolveOptions")
        .def(py::init<>())
        .def_readwrite("steps", &EvolveOptions::steps)
        .def_readwrite("observe_stride", &EvolveOptions::observe_stride)
        .def_readwrite("frame_stride", &EvolveOptions::frame_stride)
        .def_readwrite("snapshot_stride", &EvolveOptions::snapshot_stride)
        .def_readwrite("capture_velocity", &EvolveOptions::capture_velocity)
        .def_readwrite("norm_drift_abort", &EvolveOptions::norm_drift_abort)
        .def_readwrite("rho_floor", &EvolveOptions::rho_floor);

    py::class_<LinearStepper>(m, "LinearStepper")
        .def(py::init<const Grid&, const Potential&, double>(), py::arg("grid"), py::arg("potential"),
             py::arg("dt"))
        .def("step", &LinearStepper::step, py::arg("psi"), py::arg("t"));
    m.def("evolve_linear", &evolve_linear, py::arg("psi"), py::arg("stepper"), py::arg("t0"),
          py::arg("options"), py::call_guard<py::gil_scoped_release>());

    py::class_<ClassicalStepper::Params>(m, "ClassicalParams")
        .def(py::init<>())
        .def_readwrite("dt", &ClassicalStepper::Params::dt)
        .def_readwrite("caustic_threshold", &ClassicalStepper::Params::caustic_threshold)
        .def_readwrite("interp_order", &ClassicalStepper::Params::interp_order)
        .def_readwrite("clamp_budget", &ClassicalStepper::Params::clamp_budget);

    py::class_<CausticReport>(m, "CausticReport")
        .def_readonly("time", &CausticReport::time)
        .def_readonly("location", &CausticReport::location)
        .def_readonly("value", &CausticReport::value)
        .def_readonly("threshold", &CausticReport::threshold);

    py::class_<ClassicalStepper>(m, "ClassicalStepper")
        .def(py::init<const Grid&, const Potential&, const ClassicalStepper::Params&>(),
             py::arg("grid"), py::arg("potential"), py::arg("params"))
        .def("step", &ClassicalStepper::step, py::arg("state"), py::arg("t"))
        .def("clamped_mass_total", &ClassicalStepper::clamped_mass_total);
    m.def(
        "evolve_classical",
        [](PolarPair& state, const ClassicalStepper& stepper, double t0, const EvolveOptions& opt) {
            return evolve_classical(state, stepper, t0, opt);
        },
        py::arg("state"), py::arg("stepper"), py::arg("t0"), py::arg("options"),
        py::call_guard<py::gil_scoped_release>());
    m.def("caustic_monitor", &caustic_monitor, py::arg("S"), py::arg("stepper"), py::arg("t"));
    m.def("superpose_nonoverlapping", &superpose_nonoverlapping, py::arg("states"),
          py::arg("rho_floor") = -1.0);

    py::class_<Trajectory>(m, "Trajectory")
        .def_readonly("times", &Trajectory::times)
        .def_readonly("x", &Trajectory::x)
        .def_readonly("aborted", &Trajectory::aborted);

    py::class_<TrajectoryEnsemble>(m, "TrajectoryEnsemble")
        .def_readonly("members", &TrajectoryEnsemble::members)
        .def_readonly("aborted_count", &TrajectoryEnsemble::aborted_count)
        .def("aborted_fraction", &TrajectoryEnsemble::aborted_fraction);

    py::class_<FrameVelocity>(m, "FrameVelocity")
        .def(py::init<const VelocityFrames&>(), py::keep_alive<1, 2>());
    m.def(
        "propagate_ensemble",
        [](const ScalarField& rho0, const FrameVelocity& v, std::size_t n, double t0, double t1,
           double dt, std::uint64_t seed, int threads) {
            return propagate_ensemble(rho0, v, n, t0, t1, dt, seed, threads);
        },
        py::arg("rho0"), py::arg("velocity"), py::arg("n"), py::arg("t0"), py::arg("t1"),
        py::arg("dt"), py::arg("seed"), py::arg("threads") = 1,
        py::call_guard<py::gil_scoped_release>());
    m.def("histogram_l1", &histogram_l1, py::arg("ensemble"), py::arg("t"), py::arg("rho"),
          py::arg("bins") = 64);
    m.def("crest_track", &crest_track, py::arg("frames"), py::arg("x0"),
          py::arg("window_halfwidth"));

    py::class_<PositiveBasis>(m, "PositiveBasis")
        .def_static("bumps", &PositiveBasis::bumps, py::arg("grid"), py::arg("n"))
        .def("size", &PositiveBasis::size)
        .def("member", &PositiveBasis::member, py::return_value_policy::reference_internal);

    py::class_<DensityMatrix>(m, "DensityMatrix")
        .def_readonly("size", &DensityMatrix::size)
        .def("at", py::overload_cast<std::size_t, std::size_t>(&DensityMatrix::at, py::const_))
        .def("trace", &DensityMatrix::trace);
    m.def("pure_density", &pure_density);
    m.def("mixed_density", &mixed_density);
    m.def("expect_diagonal", &expect_diagonal);
    m.def("observable_matrix", &observable_matrix);
    m.def("symmetric_eigenvalues", &symmetric_eigenvalues);

    py::class_<ExchangeReport>(m, "ExchangeReport")
        .def_readonly("overlap", &ExchangeReport::overlap)
        .def_readonly("exchange_weight", &ExchangeReport::exchange_weight)
        .def_readonly("direct_weight", &ExchangeReport::direct_weight);
    m.def("exchange_density", &exchange_density, py::arg("R1"), py::arg("R2"),
          py::arg("tol") = 1e-12);

    py::class_<EhrenfestResiduals>(m, "EhrenfestResiduals")
        .def_readonly("times", &EhrenfestResiduals::times)
        .def_readonly("r1", &EhrenfestResiduals::r1)
        .def_readonly("r2", &EhrenfestResiduals::r2)
        .def("max_r1", &EhrenfestResiduals::max_r1)
        .def("max_r2", &EhrenfestResiduals::max_r2);
    m.def("ehrenfest_residuals", &ehrenfest_residuals, py::arg("density"), py::arg("velocity"),
          py::arg("potential"));

    py::class_<PhaseSpacePoint>(m, "PhaseSpacePoint")
        .def_readonly("x", &PhaseSpacePoint::x)
        .def_readonly("p", &PhaseSpacePoint::p)
        .def_readonly("weight", &PhaseSpacePoint::weight);
    py::class_<PhaseSpaceEnsemble>(m, "PhaseSpaceEnsemble")
        .def_readonly("points", &PhaseSpaceEnsemble::points);
    m.def("phase_space_from_pure", &phase_space_from_pure, py::arg("state"), py::arg("n"),
          py::arg("seed"));
    m.def("phase_space_from_R", &phase_space_from_R, py::arg("R"), py::arg("p_box"), py::arg("n"),
          py::arg("seed"));
    m.def("phase_space_average", &phase_space_average);
    m.def("evolve_phase_space", &evolve_phase_space, py::arg("ensemble"), py::arg("potential"),
          py::arg("t0"), py::arg("t1"), py::arg("dt"), py::call_guard<py::gil_scoped_release>());
    m.def("phase_space_position_l1", &phase_space_position_l1, py::arg("ensemble"), py::arg("rho"),
          py::arg("bins") = 64);

    py::class_<LoopPath>(m, "LoopPath")
        .def_static("axis_loop", &LoopPath::axis_loop)
        .def_static("rectangle", &LoopPath::rectangle, py::arg("grid"), py::arg("i0"),
                    py::arg("i1"), py::arg("j0"), py::arg("j1"));
    py::class_<WindingResult>(m, "WindingResult")
        .def_readonly("n", &WindingResult::n)
        .def_readonly("residual", &WindingResult::residual)
        .def_readonly("total", &WindingResult::total);
    m.def("winding_number", &winding_number, py::arg("S"), py::arg("loop"));
    py::class_<BohrCheck>(m, "BohrCheck")
        .def_readonly("winding", &BohrCheck::winding)
        .def_readonly("quantized", &BohrCheck::quantized);
    m.def("bohr_check", &bohr_check, py::arg("S"), py::arg("loop"), py::arg("tol") = 1e-10);
    py::class_<CoulombLevel>(m, "CoulombLevel")
        .def_readonly("n", &CoulombLevel::n)
        .def_readonly("r", &CoulombLevel::r)
        .def_readonly("E", &CoulombLevel::E)
        .def_readonly("hj_residual", &CoulombLevel::hj_residual);
    m.def("coulomb_circular_spectrum", &coulomb_circular_spectrum, py::arg("k"), py::arg("m"),
          py::arg("hbar"), py::arg("n_max"));

    py::class_<ScenarioInfo>(m, "ScenarioInfo")
        .def_readonly("name", &ScenarioInfo::name)
        .def_readonly("description", &ScenarioInfo::description)
        .def_readonly("defaults", &ScenarioInfo::defaults);
    m.def("list_scenarios", &list_scenarios);
    m.def(
        "run_scenario",
        [](const std::string& name, const std::map<std::string, std::string>& config,
           const std::filesystem::path& out_dir) {
            ScenarioConfig cfg;
            cfg.merge_overrides(config);
            const auto metrics = run_scenario(name, cfg, out_dir);
            py::dict out;
            for (const auto& [k, v] : metrics) out[py::str(k)] = v;
            return out;
        },
        py::arg("name"), py::arg("config"), py::arg("out_dir"));
    m.def("version_string", &version_string);

#ifdef CLSIM_VERSION_INFO
    m.attr("__version__") = MACRO_STRINGIFY(CLSIM_VERSION_INFO);
#else
    m.attr("__version__") = "dev";
#endif
}
