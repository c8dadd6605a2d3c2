#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fluxline/dynamics.hpp"
#include "fluxline/fitting.hpp"
#include "fluxline/io.hpp"
#include "fluxline/loss.hpp"
#include "fluxline/nanowire.hpp"
#include "fluxline/version.hpp"

namespace py = pybind11;
using namespace fluxline;

PYBIND11_MODULE(_core, m) {
    m.doc() = "nanowire-superinductance fluxonium modeling";
    m.attr("__version__") = kVersion;

    py::register_exception<ParameterError>(m, "ParameterError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);

    py::class_<SingleModeParams>(m, "SingleModeParams")
        .def(py::init([](double e_c, double e_l, double e_j) {
                 SingleModeParams p{e_c, e_l, e_j};
                 p.validate();
                 return p;
             }),
             py::arg("e_c"), py::arg("e_l"), py::arg("e_j"))
        .def_readonly("e_c", &SingleModeParams::e_c)
        .def_readonly("e_l", &SingleModeParams::e_l)
        .def_readonly("e_j", &SingleModeParams::e_j)
        .def("plasma_frequency", &SingleModeParams::plasma_frequency);

    py::class_<TwoModeParams>(m, "TwoModeParams")
        .def_readonly("c_eff", &TwoModeParams::c_eff)
        .def_readonly("l_eff", &TwoModeParams::l_eff)
        .def_readonly("q_offset", &TwoModeParams::q_offset)
        .def_readonly("e_j", &TwoModeParams::e_j)
        .def_readonly("l_j", &TwoModeParams::l_j)
        .def_static("make", &TwoModeParams::make, py::arg("c_eff"), py::arg("l_eff"),
                    py::arg("q_offset"), py::arg("e_j"));

    py::class_<NanowireGeometry>(m, "NanowireGeometry")
        .def(py::init([](double length, double width, double thickness,
                         std::optional<double> n_s) {
                 NanowireGeometry g{length, width, thickness, n_s};
                 g.validate();
                 return g;
             }),
             py::arg("length"), py::arg("width"), py::arg("thickness"),
             py::arg("n_s") = std::nullopt)
        .def_readonly("length", &NanowireGeometry::length)
        .def_readonly("width", &NanowireGeometry::width)
        .def_readonly("thickness", &NanowireGeometry::thickness)
        .def_readonly("n_s", &NanowireGeometry::n_s)
        .def("squares", &NanowireGeometry::squares);

    py::class_<CircuitTopology>(m, "CircuitTopology")
        .def(py::init([](double l_nw, double c_nw, double c_0, double c_g, double c_j,
                         int n_cells) {
                 CircuitTopology t{l_nw, c_nw, c_0, c_g, c_j, n_cells};
                 t.validate();
                 return t;
             }),
             py::arg("l_nw"), py::arg("c_nw"), py::arg("c_0") = 0.0, py::arg("c_g") = 0.0,
             py::arg("c_j") = 4e-15, py::arg("n_cells") = 64)
        .def_readonly("l_nw", &CircuitTopology::l_nw)
        .def_readonly("c_nw", &CircuitTopology::c_nw)
        .def("z_nw", &CircuitTopology::z_nw);

    py::class_<ModeRecord>(m, "ModeRecord")
        .def_readonly("frequency", &ModeRecord::frequency)
        .def_property_readonly("antisymmetric",
                               [](const ModeRecord& r) {
                                   return r.symmetry == ModeSymmetry::antisymmetric;
                               })
        .def_readonly("port_difference", &ModeRecord::port_difference)
        .def_readonly("c_eff", &ModeRecord::c_eff)
        .def_readonly("l_eff", &ModeRecord::l_eff);

    py::class_<LossModel>(m, "LossModel")
        .def(py::init([](double q_l, double q_c, double temperature) {
                 LossModel l{q_l, q_c, temperature};
                 l.validate();
                 return l;
             }),
             py::arg("q_l"), py::arg("q_c"), py::arg("temperature") = 0.020)
        .def_readonly("q_l", &LossModel::q_l)
        .def_readonly("q_c", &LossModel::q_c)
        .def_readonly("temperature", &LossModel::temperature);

    py::class_<HamiltonianMatrix>(m, "HamiltonianMatrix")
        .def_property_readonly("elements",
                               [](const HamiltonianMatrix& h) { return h.elements; })
        .def_property_readonly("dim", &HamiltonianMatrix::dim)
        .def("hermiticity_error", &HamiltonianMatrix::hermiticity_error);

    py::class_<EigenSolution>(m, "EigenSolution")
        .def_readonly("energies", &EigenSolution::energies)
        .def_readonly("vectors", &EigenSolution::vectors)
        .def_readonly("max_residual", &EigenSolution::max_residual);

    py::class_<StateLabel>(m, "StateLabel")
        .def_readonly("well_index", &StateLabel::well_index)
        .def_readonly("rank", &StateLabel::rank)
        .def_readonly("delocalized", &StateLabel::delocalized)
        .def("__str__", &StateLabel::str)
        .def("__repr__", [](const StateLabel& l) { return "<StateLabel " + l.str() + ">"; });

    py::class_<LabeledSpectrum>(m, "LabeledSpectrum")
        .def_readonly("energies", &LabeledSpectrum::energies)
        .def_readonly("labels", &LabeledSpectrum::labels)
        .def_readonly("n_elements", &LabeledSpectrum::n_elements)
        .def_readonly("phi_elements", &LabeledSpectrum::phi_elements)
        .def_readonly("phi_grid", &LabeledSpectrum::phi_grid)
        .def_readonly("wavefunctions", &LabeledSpectrum::wavefunctions);

    py::class_<TransitionRecord>(m, "TransitionRecord")
        .def_property_readonly("from_label",
                               [](const TransitionRecord& t) { return t.from.str(); })
        .def_property_readonly("to_label", [](const TransitionRecord& t) { return t.to.str(); })
        .def_readonly("frequency", &TransitionRecord::frequency)
        .def_readonly("photon_order", &TransitionRecord::photon_order)
        .def_readonly("dipole_n", &TransitionRecord::dipole_n)
        .def_readonly("dipole_phi", &TransitionRecord::dipole_phi)
        .def_property_readonly("kind",
                               [](const TransitionRecord& t) { return to_string(t.kind); });

    m.def("parse_label", &parse_label, py::arg("text"));
    m.def("kinetic_inductance", &kinetic_inductance, py::arg("geometry"));
    m.def("sheet_density_from_inductance", &sheet_density_from_inductance, py::arg("l_k"),
          py::arg("geometry"));
    m.def("normal_modes",
          [](const CircuitTopology& topo, std::optional<double> e_j) {
              std::optional<double> l_j;
              if (e_j) l_j = constants::josephson_inductance(*e_j);
              return normal_modes(build_ladder(topo, l_j));
          },
          py::arg("topology"), py::arg("e_j") = std::nullopt);
    m.def("two_mode_from_topology", &two_mode_from_topology, py::arg("topology"), py::arg("e_j"));

    m.def("build_single_mode_hamiltonian",
          [](const SingleModeParams& p, double phi_ext, int dim) {
              return build_single_mode_hamiltonian(p, FluxBias{phi_ext}, dim);
          },
          py::arg("params"), py::arg("phi_ext") = 0.0, py::arg("dim") = kDefaultSingleModeDim);
    m.def("build_two_mode_hamiltonian",
          [](const TwoModeParams& p, double phi_ext, std::array<int, 2> dims) {
              return build_two_mode_hamiltonian(p, FluxBias{phi_ext}, dims);
          },
          py::arg("params"), py::arg("phi_ext") = 0.0, py::arg("dims") = kDefaultTwoModeDims);
    m.def("diagonalize", &diagonalize, py::arg("hamiltonian"), py::arg("k"));
    m.def("label_states",
          [](const EigenSolution& sol, const SingleModeParams& p, double phi_ext) {
              return label_states(sol, p, FluxBias{phi_ext});
          },
          py::arg("solution"), py::arg("params"), py::arg("phi_ext"));
    m.def("transition_catalog",
          [](const LabeledSpectrum& s, int max_photon) {
              return transition_catalog(s, max_photon);
          },
          py::arg("spectrum"), py::arg("max_photon") = 2);
    m.def("flux_sweep",
          [](const SingleModeParams& p, const std::vector<double>& grid, int levels,
             int max_photon, int threads) {
              SweepOptions opts;
              opts.levels = levels;
              opts.max_photon = max_photon;
              opts.threads = threads;
              std::vector<std::pair<double, std::vector<TransitionRecord>>> out;
              for (const auto& pt : flux_sweep(p, grid, opts).points)
                  out.emplace_back(pt.phi_ext, pt.transitions);
              return out;
          },
          py::arg("params"), py::arg("flux_grid"), py::arg("levels") = 8,
          py::arg("max_photon") = 2, py::arg("threads") = 1);

    m.def("gamma_inductive", &gamma_inductive, py::arg("e_l"), py::arg("omega_q"),
          py::arg("mat_elem_sq"), py::arg("loss"));
    m.def("gamma_capacitive", &gamma_capacitive, py::arg("e_c"), py::arg("omega_q"),
          py::arg("mat_elem_sq"), py::arg("loss"));
    m.def("gamma_purcell", &gamma_purcell, py::arg("g"), py::arg("delta"), py::arg("kappa"));
    m.def("t1_curve",
          [](const SingleModeParams& p, const LossModel& loss, const std::vector<double>& grid,
             int threads) {
              T1CurveOptions opts;
              opts.threads = threads;
              std::vector<std::tuple<double, double, double, double, double>> out;
              for (const auto& pt : t1_curve(p, loss, grid, opts))
                  if (pt.ok)
                      out.emplace_back(pt.phi_ext, pt.omega_q, pt.rates.t1_total,
                                       1.0 / pt.rates.gamma_ind, 1.0 / pt.rates.gamma_cap);
              return out;
          },
          py::arg("params"), py::arg("loss"), py::arg("flux_grid"), py::arg("threads") = 1);

    m.def("synthesize_spectroscopy",
          [](const SingleModeParams& p, const std::vector<double>& grid, double noise,
             std::uint64_t seed) {
              const SpectroscopyDataset data = synthesize_spectroscopy(p, grid, noise, seed);
              std::vector<std::tuple<double, double, int>> out;
              for (const auto& pt : data.points)
                  out.emplace_back(pt.phi_ext, pt.freq, pt.photon_order);
              return out;
          },
          py::arg("params"), py::arg("flux_grid"), py::arg("noise_sigma"), py::arg("seed"));
}
