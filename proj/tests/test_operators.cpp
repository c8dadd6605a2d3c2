#include "doctest.h"

#include "fluxline/operators.hpp"
#include "fluxline/hamiltonian.hpp"
#include "oracles.hpp"

using namespace fluxline;

TEST_CASE("phase zpf closed form") {
    // (8 e_c / e_l)^{1/4} / sqrt(2) = 1 for e_c=1, e_l=2
    const OscillatorOps ops = oscillator_operators(2, 1.0, 2.0);
    CHECK(ops.phi_zpf == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(ops.n_zpf == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("canonical commutator on the interior block") {
    const int dim = 30;
    const OscillatorOps ops = oscillator_operators(dim, 0.89, 1.37);
    const Eigen::MatrixXcd comm =
        ops.phase.cast<std::complex<double>>() * ops.charge -
        ops.charge * ops.phase.cast<std::complex<double>>();
    const std::complex<double> i_unit(0.0, 1.0);
    // Truncation corrupts only the last basis state; the first dim-1 diagonal
    // entries carry the exact commutator.
    for (int i = 0; i < dim - 1; ++i) {
        CHECK(std::abs(comm(i, i) - i_unit) < 1e-12);
        for (int j = 0; j < dim - 1; ++j)
            if (i != j) CHECK(std::abs(comm(i, j)) < 1e-12);
    }
}

TEST_CASE("parameter domain errors") {
    CHECK_THROWS_AS(oscillator_operators(1, 1.0, 1.0), ParameterError);
    CHECK_THROWS_AS(oscillator_operators(4, -1.0, 1.0), ParameterError);
    CHECK_THROWS_AS(oscillator_operators(4, 1.0, 0.0), ParameterError);
}

TEST_CASE("displacement exponential is an exact projection") {
    // Enlarging the basis must not change the retained block at all: the
    // closed form is the projection of the infinite-dimensional operator.
    const int dim = 48;
    const double s = 1.21;
    const Eigen::MatrixXcd d = phase_exponential(dim, s);
    const Eigen::MatrixXcd d_big = phase_exponential(2 * dim, s);
    CHECK((d - d_big.topLeftCorner(dim, dim)).cwiseAbs().maxCoeff() < 1e-14);

    // Unitarity holds up to leakage through the truncation boundary, which
    // dies off quickly below the top of the basis.
    const Eigen::MatrixXcd prod = d.adjoint() * d;
    const int keep = dim / 2;
    const Eigen::MatrixXcd err = prod.topLeftCorner(keep, keep) -
                                 Eigen::MatrixXcd::Identity(keep, keep);
    CHECK(err.cwiseAbs().maxCoeff() < 1e-9);
    const int tight = dim / 4;
    const Eigen::MatrixXcd err2 = prod.topLeftCorner(tight, tight) -
                                  Eigen::MatrixXcd::Identity(tight, tight);
    CHECK(err2.cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("cosine and sine agree with matrix functions of the phase operator") {
    // Independent route: diagonalize the truncated phase operator in a much
    // larger basis, apply cos/sin to its spectrum, and project down.
    const int big = 160, dim = 24;
    const double e_c = 0.89, e_l = 1.37;
    const OscillatorOps ops = oscillator_operators(big, e_c, e_l);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(ops.phase);
    const Eigen::MatrixXd cos_big =
        es.eigenvectors() * es.eigenvalues().array().cos().matrix().asDiagonal() *
        es.eigenvectors().transpose();
    const Eigen::MatrixXd sin_big =
        es.eigenvectors() * es.eigenvalues().array().sin().matrix().asDiagonal() *
        es.eigenvectors().transpose();

    const CosSinPair cs = cosine_sine(dim, ops.phi_zpf);
    CHECK((cs.cos_mat - cos_big.topLeftCorner(dim, dim)).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((cs.sin_mat - sin_big.topLeftCorner(dim, dim)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("quadratic Hamiltonian matches the position-grid oracle") {
    // dim=40, e_c=0.89, e_l=1.37: the oscillator-basis spectrum of the
    // quadratic Hamiltonian built from charge_op agrees with the grid
    // representation of -i d/dphi to better than 1e-8 on low modes.
    const SingleModeParams p{0.89, 1.37, 0.0};
    const EigenSolution sol = diagonalize(build_single_mode_hamiltonian(p, FluxBias{0.0}, 40), 5);
    const std::vector<double> grid = oracles::grid_spectrum(p, 0.0, 5);
    for (int i = 0; i < 4; ++i)
        CHECK(std::abs(sol.energies(i) - grid[i]) < 1e-8);
}

TEST_CASE("finite-difference weights integrate a plane wave") {
    const double h = 0.01;
    const auto w = oracles::second_derivative_weights(6, h);
    const double kk = 1.7;
    double acc = w[0];
    for (int j = 1; j <= 6; ++j) acc += 2.0 * w[j] * std::cos(kk * j * h);
    CHECK(acc == doctest::Approx(-kk * kk).epsilon(1e-12));
}
