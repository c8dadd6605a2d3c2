#include "fluxline/hamiltonian.hpp"

#include <complex>

namespace fluxline {

HamiltonianMatrix SingleModeBasis::at_flux(double phi_ext) const {
    HamiltonianMatrix h;
    h.basis = BasisTag::SingleOscillator;
    h.elements = at_flux_real(phi_ext).cast<std::complex<double>>();
    return h;
}

Eigen::MatrixXd SingleModeBasis::at_flux_real(double phi_ext) const {
    // cos(phi^ + phi_ext) = cos(phi_ext) cos(phi^) - sin(phi_ext) sin(phi^)
    return h_quad - params.e_j * (std::cos(phi_ext) * cos0 - std::sin(phi_ext) * sin0);
}

SingleModeBasis make_single_mode_basis(const SingleModeParams& p, int dim) {
    p.validate();
    if (dim < 2) throw ParameterError("make_single_mode_basis: dim must be >= 2");
    SingleModeBasis b;
    b.params = p;
    b.dim = dim;
    b.ops = oscillator_operators(dim, p.e_c, p.e_l);
    const Eigen::MatrixXd n2 = (b.ops.charge * b.ops.charge).real();
    b.h_quad = 4.0 * p.e_c * n2 + 0.5 * p.e_l * (b.ops.phase * b.ops.phase);
    const CosSinPair cs = cosine_sine(dim, b.ops.phi_zpf);
    b.cos0 = cs.cos_mat;
    b.sin0 = cs.sin_mat;
    return b;
}

HamiltonianMatrix build_single_mode_hamiltonian(const SingleModeParams& p, FluxBias flux,
                                                int dim) {
    flux.validate();
    return make_single_mode_basis(p, dim).at_flux(flux.phi_ext);
}

TwoModeBasis make_two_mode_basis(const TwoModeParams& p, std::array<int, 2> dims) {
    p.validate();
    if (dims[0] < 2 || dims[1] < 2)
        throw ParameterError("make_two_mode_basis: dims must be >= 2");

    TwoModeBasis b;
    b.params = p;
    b.dims = dims;

    std::array<OscillatorOps, 2> ops;
    for (int i = 0; i < 2; ++i) {
        b.e_c[i] = constants::charging_energy_ghz(p.c_eff[i]);
        b.e_l[i] = constants::inductive_energy_ghz(p.l_eff[i]);
        // The basis oscillator includes the junction's linear inductance so the
        // quadratic problem is diagonal up to the cosine remainder.
        const double e_l_full = b.e_l[i] + p.e_j;
        b.mode_freq[i] = std::sqrt(8.0 * b.e_c[i] * e_l_full);
        ops[i] = oscillator_operators(dims[i], b.e_c[i], e_l_full);
        b.theta_zpf[i] = ops[i].phi_zpf;
    }

    const Eigen::MatrixXd id0 = Eigen::MatrixXd::Identity(dims[0], dims[0]);
    const Eigen::MatrixXd id1 = Eigen::MatrixXd::Identity(dims[1], dims[1]);
    const Eigen::MatrixXcd id0c = id0.cast<std::complex<double>>();
    const Eigen::MatrixXcd id1c = id1.cast<std::complex<double>>();

    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(b.dim(), b.dim());
    for (int i = 0; i < 2; ++i) {
        const Eigen::MatrixXcd n_shift =
            ops[i].charge - p.q_offset[i] * Eigen::MatrixXcd::Identity(dims[i], dims[i]);
        const Eigen::MatrixXcd mode_h =
            4.0 * b.e_c[i] * (n_shift * n_shift) +
            (0.5 * b.e_l[i] * (ops[i].phase * ops[i].phase)).cast<std::complex<double>>();
        h += (i == 0) ? kronecker(mode_h, id1c) : kronecker(id0c, mode_h);
    }
    // -phi_0 phi_1 / L_J reduces to -E_J theta_0 theta_1 in GHz units.
    h -= p.e_j * kronecker_real(ops[0].phase, ops[1].phase).cast<std::complex<double>>();
    b.h_static = h;

    const Eigen::MatrixXcd w = kronecker(phase_exponential(dims[0], b.theta_zpf[0]),
                                         phase_exponential(dims[1], b.theta_zpf[1]));
    b.cos0 = w.real();
    b.sin0 = w.imag();

    b.theta_sum = kronecker_real(ops[0].phase, id1) + kronecker_real(id0, ops[1].phase);
    b.charge_sum = kronecker(ops[0].charge, id1c) + kronecker(id0c, ops[1].charge);
    const Eigen::MatrixXd a1 = annihilation_re(dims[1]);
    b.mode1_number = kronecker_real(id0, a1.transpose() * a1);
    return b;
}

HamiltonianMatrix TwoModeBasis::at_flux(double phi_ext) const {
    HamiltonianMatrix h;
    h.basis = BasisTag::TwoOscillator;
    h.elements = h_static;
    h.elements -= (params.e_j * (std::cos(phi_ext) * cos0 - std::sin(phi_ext) * sin0))
                      .cast<std::complex<double>>();
    return h;
}

HamiltonianMatrix build_two_mode_hamiltonian(const TwoModeParams& p, FluxBias flux,
                                             std::array<int, 2> dims) {
    flux.validate();
    return make_two_mode_basis(p, dims).at_flux(flux.phi_ext);
}

HamiltonianMatrix couple_resonator(const HamiltonianMatrix& h_qubit,
                                   const Eigen::MatrixXcd& charge_op, const ResonatorParams& r,
                                   int n_fock, int dim_cap) {
    r.validate();
    if (n_fock < 2) throw ParameterError("couple_resonator: n_fock must be >= 2");
    const int dq = h_qubit.dim();
    if (charge_op.rows() != dq || charge_op.cols() != dq)
        throw ParameterError("couple_resonator: charge operator dimension mismatch");
    if (static_cast<long>(dq) * n_fock > dim_cap)
        throw ParameterError("couple_resonator: dimension product exceeds cap");

    const Eigen::MatrixXd a = annihilation_re(n_fock);
    const Eigen::MatrixXcd idq = Eigen::MatrixXcd::Identity(dq, dq);
    const Eigen::MatrixXcd idf = Eigen::MatrixXcd::Identity(n_fock, n_fock);
    HamiltonianMatrix h;
    h.basis = BasisTag::QubitFock;
    h.elements = kronecker(h_qubit.elements, idf) +
                 r.omega_r * kronecker(idq, (a.transpose() * a).cast<std::complex<double>>()) +
                 r.g * kronecker(charge_op, (a + a.transpose()).cast<std::complex<double>>());
    return h;
}

EigenSolution diagonalize(const HamiltonianMatrix& h, int k) {
    const int dim = h.dim();
    if (k < 1 || k > dim) throw ParameterError("diagonalize: k out of range");
    if (h.hermiticity_error() > 1e-9)
        throw NumericalError("diagonalize: matrix is not Hermitian");

    EigenSolution sol;
    const double scale = h.elements.cwiseAbs().maxCoeff();
    const double imag_max = h.elements.imag().cwiseAbs().maxCoeff();
    if (imag_max <= 1e-14 * std::max(scale, 1.0)) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.elements.real());
        if (es.info() != Eigen::Success)
            throw NumericalError("diagonalize: real symmetric eigensolver failed");
        sol.energies = es.eigenvalues().head(k);
        sol.vectors = es.eigenvectors().leftCols(k).cast<std::complex<double>>();
    } else {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h.elements);
        if (es.info() != Eigen::Success)
            throw NumericalError("diagonalize: Hermitian eigensolver failed");
        sol.energies = es.eigenvalues().head(k);
        sol.vectors = es.eigenvectors().leftCols(k);
    }

    double max_res = 0.0;
    for (int j = 0; j < k; ++j) {
        const double res =
            (h.elements * sol.vectors.col(j) - sol.energies(j) * sol.vectors.col(j)).norm();
        max_res = std::max(max_res, res);
    }
    sol.max_residual = max_res / std::max(scale, 1e-300);
    if (sol.max_residual > 1e-9)
        throw NumericalError("diagonalize: residual " + std::to_string(sol.max_residual) +
                             " exceeds 1e-9 of the matrix scale");
    return sol;
}

ProjectedSystem project_lowest(const HamiltonianMatrix& h, const Eigen::MatrixXcd& charge_op,
                               int k) {
    const EigenSolution sol = diagonalize(h, k);
    ProjectedSystem out;
    out.energies = sol.energies;
    out.h.basis = h.basis;
    out.h.elements = sol.energies.cast<std::complex<double>>().asDiagonal();
    out.charge = sol.vectors.adjoint() * charge_op * sol.vectors;
    return out;
}

double basis_convergence_shift(const SingleModeParams& p, FluxBias flux, int dim, int k) {
    const EigenSolution a = diagonalize(build_single_mode_hamiltonian(p, flux, dim), k);
    const EigenSolution b = diagonalize(build_single_mode_hamiltonian(p, flux, 2 * dim), k);
    return (a.energies - b.energies.head(k)).cwiseAbs().maxCoeff();
}

int converged_single_mode_dim(const SingleModeParams& p, FluxBias flux, int k, double tol,
                              int start, int max_dim) {
    for (int dim = start; dim <= max_dim; dim *= 2) {
        if (basis_convergence_shift(p, flux, dim, k) < tol) return dim;
    }
    throw NumericalError("converged_single_mode_dim: no convergence below dim " +
                         std::to_string(max_dim));
}

} // namespace fluxline
