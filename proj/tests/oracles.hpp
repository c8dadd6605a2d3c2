#pragma once

// Independent numerical oracles used by the test suites. These deliberately
// avoid the library's oscillator-basis code paths: the grid oracle works in
// the position representation with high-order finite differences, and the
// analytic oracles are closed forms.

#include <vector>

#include <Eigen/Dense>

#include "fluxline/params.hpp"

namespace oracles {

// Lowest k eigenvalues (GHz) of 4 E_C n^2 + 1/2 E_L phi^2 - E_J cos(phi+phi_ext)
// on a uniform phi grid with a 12th-order finite-difference kinetic term.
std::vector<double> grid_spectrum(const fluxline::SingleModeParams& p, double phi_ext, int k,
                                  int n_points = 2048, double phi_max = 8.0 * M_PI);

// Central finite-difference weights for d^2/dx^2 with 2p+1 points, spacing h.
std::vector<double> second_derivative_weights(int p, double h);

// Half-wave resonance ladder of an open-ended uniform line (GHz).
double open_line_mode_frequency(int n, double l_total, double c_total);

// Second-order dressed energy of |qubit i, m photons> under g n (a + a^dag).
double perturbative_dressed_energy(const Eigen::VectorXd& qubit_energies,
                                   const Eigen::MatrixXcd& charge_elements, double omega_r,
                                   double g, int i, int m, int n_fock);

// Steady-state excited population of a resonantly driven, damped two-level
// system: (Omega/2)^2 / (Delta^2 + Gamma^2/4 + Omega^2/2) with angular inputs.
double bloch_steady_excited(double rabi_angular, double detuning_angular, double gamma);

} // namespace oracles
