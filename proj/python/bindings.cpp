// Python surface of the library: parameter struct, resolvents, loop
// integrals, the resummed scattering amplitude, spectra and maps, ridge
// extraction, and the brute-force reference model.  Thin wrappers only —
// all numerics stay in the C++ core.

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <complex>
#include <vector>

#include "ryscat/greens.hpp"
#include "ryscat/model.hpp"
#include "ryscat/oracle.hpp"
#include "ryscat/spectrum.hpp"
#include "ryscat/tmatrix.hpp"

namespace py = pybind11;
using namespace ryscat;

namespace {

std::vector<std::vector<cxd>> resolvent_rows(const ResolventMatrix& g) {
    std::vector<std::vector<cxd>> rows(static_cast<std::size_t>(g.dim));
    for (int i = 0; i < g.dim; ++i)
        for (int j = 0; j < g.dim; ++j)
            rows[static_cast<std::size_t>(i)].push_back(g(i, j));
    return rows;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "cavity Rydberg-EIT transmission spectra: resolvents, loop "
              "integrals, resummed scattering amplitudes, and a brute-force "
              "reference model";

    py::class_<SystemParams>(m, "SystemParams")
        .def(py::init<>())
        .def_readwrite("gamma_e", &SystemParams::gamma_e)
        .def_readwrite("gamma_r", &SystemParams::gamma_r)
        .def_readwrite("gamma_c_f", &SystemParams::gamma_c_f)
        .def_readwrite("gamma_c_d", &SystemParams::gamma_c_d)
        .def_readwrite("cooperativity", &SystemParams::cooperativity)
        .def_readwrite("omega_cf", &SystemParams::omega_cf)
        .def_readwrite("delta_c", &SystemParams::delta_c)
        .def_readwrite("delta_e", &SystemParams::delta_e)
        .def_readwrite("delta_r", &SystemParams::delta_r)
        .def_readwrite("alpha", &SystemParams::alpha)
        .def_readwrite("c6", &SystemParams::c6)
        .def_readwrite("volume", &SystemParams::volume)
        .def_readwrite("n_atoms", &SystemParams::n_atoms)
        .def("gamma_c", &SystemParams::gamma_c)
        .def("g_sqrt_n", &SystemParams::g_sqrt_n)
        .def("validate", &SystemParams::validate)
        .def("__repr__", [](const SystemParams& p) {
            return "SystemParams(cooperativity=" + std::to_string(p.cooperativity) +
                   ", omega_cf=" + std::to_string(p.omega_cf) +
                   ", alpha=" + std::to_string(p.alpha) + ", c6=" +
                   std::to_string(p.c6) + ", ...)";
        });

    py::class_<GridSpec>(m, "GridSpec")
        .def(py::init([](double min, double max, int points) {
                 return GridSpec{min, max, points};
             }),
             py::arg("min"), py::arg("max"), py::arg("points"))
        .def_readwrite("min", &GridSpec::min)
        .def_readwrite("max", &GridSpec::max)
        .def_readwrite("points", &GridSpec::points)
        .def("at", &GridSpec::at);

    py::enum_<Sector>(m, "Sector")
        .value("symmetric", Sector::symmetric)
        .value("q_nonzero", Sector::q_nonzero);
    py::enum_<LoopMethod>(m, "LoopMethod")
        .value("residues", LoopMethod::residues)
        .value("quadrature", LoopMethod::quadrature);
    py::enum_<TMatrixMethod>(m, "TMatrixMethod")
        .value("closed_form", TMatrixMethod::closed_form)
        .value("discrete_sum", TMatrixMethod::discrete_sum);
    py::enum_<ScalingObservable>(m, "ScalingObservable")
        .value("elastic_weight", ScalingObservable::elastic_weight)
        .value("third_order_deviation", ScalingObservable::third_order_deviation)
        .value("inelastic_power", ScalingObservable::inelastic_power);

    m.def(
        "greens",
        [](const SystemParams& p, double omega, Sector sector) {
            return resolvent_rows(greens(p, omega, sector));
        },
        py::arg("params"), py::arg("omega"), py::arg("sector") = Sector::symmetric,
        "Resolvent (omega I - M_eff)^-1 as a nested list of complex entries.");
    m.def("polariton_energies", &polariton_energies, py::arg("params"),
          "Eigenvalues eps_k of the coherent symmetric-sector matrix.");
    m.def(
        "loop_integral",
        [](const SystemParams& p, Sector sector, LoopMethod method) {
            return loop_integral(p, sector, method);
        },
        py::arg("params"), py::arg("sector") = Sector::q_nonzero,
        py::arg("method") = LoopMethod::residues,
        "Two-spinwave propagation bubble S (q_nonzero) or S0 (symmetric).");

    py::class_<TMatrixResult>(m, "TMatrixResult")
        .def_readonly("S", &TMatrixResult::S)
        .def_readonly("S0", &TMatrixResult::S0)
        .def_readonly("t_tilde0", &TMatrixResult::t_tilde0)
        .def_readonly("t0", &TMatrixResult::t0)
        .def_readonly("method", &TMatrixResult::method)
        .def_readonly("branch", &TMatrixResult::branch)
        .def_readonly("closed_mismatch", &TMatrixResult::closed_mismatch)
        .def_readonly("mc_std_err", &TMatrixResult::mc_std_err)
        .def_readonly("r_blockade", &TMatrixResult::r_blockade)
        .def_readonly("blockade_volume_ratio", &TMatrixResult::blockade_volume_ratio)
        .def_readonly("loop_fallback", &TMatrixResult::loop_fallback);
    m.def("compute_tmatrix", &compute_tmatrix, py::arg("params"),
          py::arg("method") = TMatrixMethod::closed_form,
          py::arg("mc_positions") = 4000,
          py::arg("seeds") = std::vector<std::uint64_t>{1, 2, 3, 4, 5, 6, 7, 8},
          py::arg("workers") = 1,
          "Loop integrals plus the resummed scattering amplitude T0.");
    m.def("t0_resummed", &t0_resummed, py::arg("t_tilde0"), py::arg("S0"), py::arg("S"));
    m.def("blockade_radius", &blockade_radius, py::arg("params"), py::arg("S"));

    py::class_<ElasticWeights>(m, "ElasticWeights")
        .def_readonly("weight_2", &ElasticWeights::weight_2)
        .def_readonly("weight_4", &ElasticWeights::weight_4);
    m.def("elastic_weights", &elastic_weights, py::arg("params"), py::arg("t0"));
    m.def("inelastic_density", &inelastic_density, py::arg("params"), py::arg("t0"),
          py::arg("omega"));

    py::class_<SpectrumResult>(m, "SpectrumResult")
        .def_readonly("elastic", &SpectrumResult::elastic)
        .def_readonly("omega", &SpectrumResult::omega)
        .def_readonly("density", &SpectrumResult::density)
        .def_readonly("amp1", &SpectrumResult::amp1)
        .def_readonly("amp3", &SpectrumResult::amp3)
        .def_readonly("tmatrix", &SpectrumResult::tmatrix);
    m.def("compute_spectrum", &compute_spectrum, py::arg("params"), py::arg("grid"),
          py::arg("method") = TMatrixMethod::closed_form, py::arg("mc_positions") = 4000,
          py::arg("seeds") = std::vector<std::uint64_t>{1, 2, 3, 4, 5, 6, 7, 8},
          "Elastic weights and inelastic density over a frequency grid.");

    py::class_<MapResult>(m, "MapResult")
        .def_readonly("omega_cf", &MapResult::omega_cf)
        .def_readonly("omega", &MapResult::omega)
        .def_readonly("density", &MapResult::density)
        .def_readonly("eps", &MapResult::eps)
        .def_readonly("t0", &MapResult::t0)
        .def_property_readonly("column_valid",
                               [](const MapResult& r) {
                                   std::vector<bool> v(r.column_valid.size());
                                   for (std::size_t i = 0; i < v.size(); ++i)
                                       v[i] = r.column_valid[i] != 0;
                                   return v;
                               })
        .def_readonly("column_error", &MapResult::column_error)
        .def_readonly("log_floor", &MapResult::log_floor)
        .def("at", &MapResult::at, py::arg("icf"), py::arg("iomega"));
    m.def("spectrum_map", &spectrum_map, py::arg("params"), py::arg("omega_grid"),
          py::arg("omega_cf_grid"), py::arg("workers") = 1,
          "2-D inelastic density over (control Rabi, frequency) with the "
          "polariton overlay per column.");

    py::class_<Ridge>(m, "Ridge")
        .def_readonly("index", &Ridge::index)
        .def_readonly("omega", &Ridge::omega)
        .def_readonly("height", &Ridge::height)
        .def_readonly("prominence", &Ridge::prominence)
        .def("__repr__", [](const Ridge& r) {
            return "Ridge(omega=" + std::to_string(r.omega) +
                   ", prominence=" + std::to_string(r.prominence) + ")";
        });
    m.def("find_ridges", &find_ridges, py::arg("omega"), py::arg("height"),
          py::arg("min_prominence_fraction"),
          "Interior local maxima with topographic prominence.");

    py::class_<TwoTimeSpectrum>(m, "TwoTimeSpectrum")
        .def_readonly("omega", &TwoTimeSpectrum::omega)
        .def_readonly("density", &TwoTimeSpectrum::density)
        .def_readonly("elastic_weight", &TwoTimeSpectrum::elastic_weight)
        .def_readonly("integrated_inelastic", &TwoTimeSpectrum::integrated_inelastic)
        .def_readonly("total_power", &TwoTimeSpectrum::total_power)
        .def_readonly("mean_a", &TwoTimeSpectrum::mean_a)
        .def_readonly("n_a", &TwoTimeSpectrum::n_a)
        .def_readonly("covariance", &TwoTimeSpectrum::covariance)
        .def_readonly("plateau_residual", &TwoTimeSpectrum::plateau_residual)
        .def_readonly("horizon_shift", &TwoTimeSpectrum::horizon_shift);
    m.def(
        "oracle_spectrum",
        [](const SystemParams& p, const std::vector<Vec3>& positions, int n_max,
           const std::vector<double>& omega_grid, double horizon) {
            const auto model = build_model<double>(p, positions, n_max);
            const auto rho = steady_state(model);
            return emission_spectrum(model, rho, omega_grid, horizon);
        },
        py::arg("params"), py::arg("positions"), py::arg("n_max"),
        py::arg("omega_grid"), py::arg("horizon") = 12.0,
        "Brute-force emission spectrum of the truncated-basis model: steady "
        "state by null-space extraction, two-time correlator by regression.");

    py::class_<ScalingFit>(m, "ScalingFit")
        .def_readonly("exponent", &ScalingFit::exponent)
        .def_readonly("max_residual", &ScalingFit::max_residual)
        .def_readonly("alphas", &ScalingFit::alphas)
        .def_readonly("values", &ScalingFit::values);
    m.def(
        "alpha_scaling",
        [](const SystemParams& p, const std::vector<Vec3>& positions, int n_max,
           const std::vector<double>& alphas, ScalingObservable obs) {
            return alpha_scaling<double>(p, positions, n_max, alphas, obs);
        },
        py::arg("params"), py::arg("positions"), py::arg("n_max"), py::arg("alphas"),
        py::arg("observable"),
        "Log-log fit of a steady-state observable against the feeding rate.");
}
