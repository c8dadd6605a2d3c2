#pragma once

// Eigenstate labeling by potential well, transition cataloging and flux
// sweeps for the single-mode and two-mode models.

#include <string>
#include <vector>

#include "fluxline/hamiltonian.hpp"

namespace fluxline {

struct StateLabel {
    int well_index = 0;
    int rank = 0; // 0=g, 1=e, 2=f, 3=h, then i, j, ...
    bool delocalized = false;

    std::string str() const;
    friend bool operator==(const StateLabel& a, const StateLabel& b) {
        return a.well_index == b.well_index && a.rank == b.rank;
    }
};

StateLabel parse_label(const std::string& text);

// Local minima and barrier tops of V(phi) = 1/2 E_L phi^2 - E_J cos(phi+phi_ext).
struct PotentialWells {
    std::vector<double> minima;   // ascending phi
    std::vector<double> barriers; // between adjacent minima
    std::vector<int> indices;     // well index = round((phi_min + phi_ext)/2pi)

    int basin_of(double phi) const; // position in `minima` whose basin holds phi
};

PotentialWells find_wells(const SingleModeParams& p, double phi_ext);

struct LabeledSpectrum {
    double phi_ext = 0.0;
    Eigen::VectorXd energies; // GHz, ascending
    std::vector<StateLabel> labels;
    Eigen::VectorXd phi_grid;
    Eigen::MatrixXcd wavefunctions;  // grid points x states
    Eigen::MatrixXcd n_elements;     // <i|n|j>
    Eigen::MatrixXcd phi_elements;   // <i|phi|j>
    Eigen::VectorXd mode1_occupation; // two-mode only: <a1^dag a1> per state
    double circuit_e_c = 0.0; // GHz, for loss-channel rates
    double circuit_e_l = 0.0;

    int size() const { return static_cast<int>(energies.size()); }
    int index_of(const StateLabel& l) const; // -1 when absent
};

// psi_n(phi) columns for the oscillator basis with the given phase zpf.
Eigen::MatrixXd hermite_basis_matrix(const Eigen::VectorXd& grid, int dim, double phi_zpf);

struct LabelOptions {
    int grid_points = 1024;
    double delocalized_threshold = 0.6;
};

LabeledSpectrum label_states(const EigenSolution& sol, const SingleModeParams& p, FluxBias flux,
                             const LabelOptions& opts = {});

enum class TransitionKind { plasmon, fluxon, sideband, jj_mode };
std::string to_string(TransitionKind k);

struct TransitionRecord {
    StateLabel from;
    StateLabel to;
    double frequency = 0.0; // GHz; order-n lines are plotted at dE/n
    int photon_order = 1;
    double dipole_n = 0.0;
    double dipole_phi = 0.0;
    TransitionKind kind = TransitionKind::plasmon;
};

struct CatalogOptions {
    double temperature_k = 0.020;    // thermal reachability window 3 k_B T
    double dipole_threshold = 1e-8;  // adjacency cutoff for multi-photon paths
};

std::vector<TransitionRecord> transition_catalog(const LabeledSpectrum& s, int max_photon,
                                                 const CatalogOptions& opts = {});

struct SweepPoint {
    double phi_ext = 0.0;
    std::vector<TransitionRecord> transitions;
    bool ok = true;
    std::string diagnostic;
};

struct SweepResult {
    std::vector<SweepPoint> points;
};

struct SweepOptions {
    int levels = 8;
    int max_photon = 2;
    int dim = kDefaultSingleModeDim;
    std::array<int, 2> dims = kDefaultTwoModeDims;
    int threads = 1;
    CatalogOptions catalog;
    LabelOptions label;
};

SweepResult flux_sweep(const SingleModeParams& p, const std::vector<double>& flux_grid,
                       const SweepOptions& opts = {});
SweepResult flux_sweep(const TwoModeParams& p, const std::vector<double>& flux_grid,
                       const SweepOptions& opts = {});

// Label the eigenstates of a two-mode solution through the junction-phase
// marginal and the mode-1 occupation.
LabeledSpectrum label_two_mode_states(const EigenSolution& sol, const TwoModeBasis& basis,
                                      double phi_ext, const LabelOptions& opts = {});

// Joint-system transitions that change the qubit label and the resonator
// photon number by one, from the dressed ground state.
std::vector<TransitionRecord> sideband_lines(const HamiltonianMatrix& h_coupled,
                                             const ResonatorParams& r, const LabeledSpectrum& s);

} // namespace fluxline
