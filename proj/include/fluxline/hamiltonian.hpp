#pragma once

// Hamiltonian assembly for the single-mode, two-mode and resonator-coupled
// circuit models, plus dense diagonalization. All matrices are H/h in GHz.

#include <array>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fluxline/operators.hpp"
#include "fluxline/params.hpp"

namespace fluxline {

enum class BasisTag { SingleOscillator, TwoOscillator, QubitFock };

struct HamiltonianMatrix {
    Eigen::MatrixXcd elements; // GHz
    BasisTag basis = BasisTag::SingleOscillator;

    int dim() const { return static_cast<int>(elements.rows()); }
    double hermiticity_error() const {
        return (elements - elements.adjoint()).cwiseAbs().maxCoeff();
    }
};

// Flux-independent pieces of the single-mode model; a flux sweep only pays
// for the eigensolve at each point.
struct SingleModeBasis {
    SingleModeParams params;
    int dim = 0;
    OscillatorOps ops;
    Eigen::MatrixXd h_quad;  // 4 E_C n^2 + 1/2 E_L phi^2
    Eigen::MatrixXd cos0;    // cos(phi^)
    Eigen::MatrixXd sin0;    // sin(phi^)

    HamiltonianMatrix at_flux(double phi_ext) const;
    Eigen::MatrixXd at_flux_real(double phi_ext) const;
};

SingleModeBasis make_single_mode_basis(const SingleModeParams& p, int dim);

inline constexpr int kDefaultSingleModeDim = 60;
inline constexpr std::array<int, 2> kDefaultTwoModeDims{40, 20};

HamiltonianMatrix build_single_mode_hamiltonian(const SingleModeParams& p, FluxBias flux,
                                                int dim = kDefaultSingleModeDim);

struct TwoModeBasis {
    TwoModeParams params;
    std::array<int, 2> dims{0, 0};
    std::array<double, 2> e_c{0.0, 0.0};      // GHz per mode
    std::array<double, 2> e_l{0.0, 0.0};      // GHz per mode, junction removed
    std::array<double, 2> mode_freq{0.0, 0.0}; // GHz, junction included
    std::array<double, 2> theta_zpf{0.0, 0.0};
    Eigen::MatrixXcd h_static; // quadratic + offset-charge + bilinear parts
    Eigen::MatrixXd cos0;      // cos(theta_0 + theta_1)
    Eigen::MatrixXd sin0;
    Eigen::MatrixXd theta_sum;       // theta_0 + theta_1 (junction phase)
    Eigen::MatrixXcd charge_sum;     // n_0 + n_1
    Eigen::MatrixXd mode1_number;    // I (x) a^dag a

    HamiltonianMatrix at_flux(double phi_ext) const;
    int dim() const { return dims[0] * dims[1]; }
};

TwoModeBasis make_two_mode_basis(const TwoModeParams& p,
                                 std::array<int, 2> dims = kDefaultTwoModeDims);

HamiltonianMatrix build_two_mode_hamiltonian(const TwoModeParams& p, FluxBias flux,
                                             std::array<int, 2> dims = kDefaultTwoModeDims);

// H_qubit (x) I + omega_r I (x) a^dag a + g charge (x) (a + a^dag).
// The dimension product is capped to keep dense solves tractable.
HamiltonianMatrix couple_resonator(const HamiltonianMatrix& h_qubit,
                                   const Eigen::MatrixXcd& charge_op, const ResonatorParams& r,
                                   int n_fock, int dim_cap = 16384);

struct EigenSolution {
    Eigen::VectorXd energies;  // GHz, ascending, k entries
    Eigen::MatrixXcd vectors;  // columns
    double max_residual = 0.0; // max over pairs of |Hv - Ev| / |H|
};

// Lowest k eigenpairs of a Hermitian matrix. Falls back to a real symmetric
// solve when the imaginary part is negligible.
EigenSolution diagonalize(const HamiltonianMatrix& h, int k);

// Restrict (H, charge) to the span of the lowest k eigenstates; H becomes
// diagonal in that basis.
struct ProjectedSystem {
    HamiltonianMatrix h;
    Eigen::MatrixXcd charge;
    Eigen::VectorXd energies;
};
ProjectedSystem project_lowest(const HamiltonianMatrix& h, const Eigen::MatrixXcd& charge_op,
                               int k);

// Doubling test: max shift of the lowest k eigenvalues when dim is doubled.
double basis_convergence_shift(const SingleModeParams& p, FluxBias flux, int dim, int k);

// Smallest dimension (doubling from `start`) whose doubling shift on the
// lowest k eigenvalues stays below tol.
int converged_single_mode_dim(const SingleModeParams& p, FluxBias flux, int k,
                              double tol = 1e-6, int start = kDefaultSingleModeDim,
                              int max_dim = 960);

} // namespace fluxline
