#include "doctest.h"

#include "fluxline/hamiltonian.hpp"
#include "fluxline/nanowire.hpp"
#include "oracles.hpp"

using namespace fluxline;

namespace {
const SingleModeParams kDevice1{0.89, 1.37, 10.95};
const SingleModeParams kDevice2{0.56, 0.52, 16.16};
const SingleModeParams kDevice3{1.90, 0.53, 5.90};
} // namespace

TEST_CASE("harmonic limit: uniform ladder at sqrt(8 E_C E_L)") {
    SingleModeParams p = kDevice1;
    p.e_j = 0.0;
    const double spacing = std::sqrt(8.0 * p.e_c * p.e_l);
    for (double flux : {0.0, 1.1, -2.7}) {
        const EigenSolution sol =
            diagonalize(build_single_mode_hamiltonian(p, FluxBias{flux}, 60), 10);
        for (int i = 0; i + 1 < 10; ++i)
            CHECK(sol.energies(i + 1) - sol.energies(i) ==
                  doctest::Approx(spacing).epsilon(1e-9));
    }
}

TEST_CASE("hermiticity of assembled Hamiltonians") {
    const HamiltonianMatrix h1 =
        build_single_mode_hamiltonian(kDevice2, FluxBias{-0.46 * M_PI}, 50);
    CHECK(h1.hermiticity_error() < 1e-12);

    const TwoModeParams tp = TwoModeParams::make({4.0e-14, 6.0e-15}, {1.2e-7, 5.0e-9},
                                                 {0.3, 0.7}, 10.95);
    const HamiltonianMatrix h2 = build_two_mode_hamiltonian(tp, FluxBias{0.4}, {14, 8});
    CHECK(h2.hermiticity_error() < 1e-12);
}

TEST_CASE("basis convergence under dim doubling, escalated from the default") {
    for (const auto& p : {kDevice1, kDevice2, kDevice3}) {
        const int dim = converged_single_mode_dim(p, FluxBias{-0.38 * M_PI}, 8);
        CHECK(dim <= 240);
        CHECK(basis_convergence_shift(p, FluxBias{-0.38 * M_PI}, dim, 8) < 1e-6);
    }
}

TEST_CASE("device 2 anchor: two-photon g0->f0 resonance") {
    // The fixed 7.78 GHz alpha tone in the three-tone protocol addresses
    // E_f0 - E_g0 = 15.56 GHz at phi_ext = -0.46 pi.
    const EigenSolution sol =
        diagonalize(build_single_mode_hamiltonian(kDevice2, FluxBias{-0.46 * M_PI}, 80), 6);
    // In the deep-well regime the f0 state is the second intrawell excitation:
    // pick the plasmon ladder by energy ordering within the central well.
    // Indices: 0=g0, then e0 and the neighboring-well g-1 interleave.
    // The two-photon anchor only needs the level itself:
    bool found = false;
    for (int j = 1; j < 6; ++j) {
        const double de = sol.energies(j) - sol.energies(0);
        if (std::abs(de - 15.56) / 15.56 < 0.03) found = true;
    }
    CHECK(found);
}

TEST_CASE("device 3: lowest transition is flux insensitive at half flux") {
    const double d = 1e-4;
    auto f01 = [&](double flux) {
        const EigenSolution sol =
            diagonalize(build_single_mode_hamiltonian(kDevice3, FluxBias{flux}, 70), 2);
        return sol.energies(1) - sol.energies(0);
    };
    const double slope = (f01(-M_PI + d) - f01(-M_PI - d)) / (2.0 * d);
    CHECK(std::abs(slope) < 1e-6);
}

TEST_CASE("flux periodicity and mirror symmetry") {
    for (double flux : {0.3, -1.9}) {
        const EigenSolution a =
            diagonalize(build_single_mode_hamiltonian(kDevice1, FluxBias{flux}, 60), 8);
        const EigenSolution b = diagonalize(
            build_single_mode_hamiltonian(kDevice1, FluxBias{flux + 2.0 * M_PI}, 60), 8);
        const EigenSolution c =
            diagonalize(build_single_mode_hamiltonian(kDevice1, FluxBias{-flux}, 60), 8);
        CHECK((a.energies - b.energies).cwiseAbs().maxCoeff() < 1e-9);
        CHECK((a.energies - c.energies).cwiseAbs().maxCoeff() < 1e-9);
    }
}

TEST_CASE("grid oracle equivalence across devices and fluxes") {
    for (const auto& p : {kDevice1, kDevice2, kDevice3}) {
        for (double flux : {0.0, -0.38 * M_PI}) {
            const EigenSolution sol =
                diagonalize(build_single_mode_hamiltonian(p, FluxBias{flux}, 140), 6);
            const std::vector<double> grid = oracles::grid_spectrum(p, flux, 6);
            for (int i = 0; i < 6; ++i)
                CHECK(std::abs(sol.energies(i) - grid[i]) < 1e-6);
        }
    }
}

TEST_CASE("two-mode offset charge is a gauge choice") {
    // Both modes inductively shunted: shifting q_g is a translation in the
    // charge variable and leaves the spectrum fixed. Basis sizes must cover
    // the junction wells for the truncated problems to agree.
    const TwoModeParams base = TwoModeParams::make(
        {constants::capacitance_from_charging_energy(1.2),
         constants::capacitance_from_charging_energy(3.0)},
        {constants::inductance_from_inductive_energy(3.0),
         constants::inductance_from_inductive_energy(14.0)},
        {0.0, 0.0}, 2.0);
    TwoModeParams shifted = base;
    shifted.q_offset = {0.3, 0.7};
    const EigenSolution a =
        diagonalize(build_two_mode_hamiltonian(base, FluxBias{0.7}, {48, 18}), 6);
    const EigenSolution b =
        diagonalize(build_two_mode_hamiltonian(shifted, FluxBias{0.7}, {48, 18}), 6);
    CHECK((a.energies - b.energies).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("two-mode model decouples to single mode as mode 1 stiffens") {
    // Stiffening the second mode (l_eff -> 0 at fixed c_eff) pins its phase;
    // the spectrum then converges monotonically to the single-mode model built
    // from (c_eff[0], l_eff[0], e_j).
    const double e_j = 10.95;
    const double c0 = constants::capacitance_from_charging_energy(kDevice1.e_c);
    const double l0 = constants::inductance_from_inductive_energy(kDevice1.e_l);
    const double flux = 0.8;

    const EigenSolution ref =
        diagonalize(build_single_mode_hamiltonian(kDevice1, FluxBias{flux}, 90), 5);

    const double l_j = constants::josephson_inductance(e_j);
    double prev_err = 1e9;
    for (double scale : {1e-2, 1e-4, 1e-6}) {
        const TwoModeParams p =
            TwoModeParams::make({c0, 2e-14}, {l0, scale * l_j}, {0.0, 0.0}, e_j);
        const EigenSolution sol =
            diagonalize(build_two_mode_hamiltonian(p, FluxBias{flux}, {70, 8}), 5);
        Eigen::VectorXd gaps_two(4), gaps_one(4);
        for (int i = 0; i < 4; ++i) {
            gaps_two(i) = sol.energies(i + 1) - sol.energies(0);
            gaps_one(i) = ref.energies(i + 1) - ref.energies(0);
        }
        const double err = (gaps_two - gaps_one).cwiseAbs().maxCoeff();
        CHECK(err < prev_err);
        prev_err = err;
    }
    CHECK(prev_err < 5e-3);
}

TEST_CASE("resonator coupling: g=0 gives exact tensor sums") {
    const ProjectedSystem qubit = [] {
        const SingleModeBasis basis = make_single_mode_basis(kDevice1, 60);
        return project_lowest(basis.at_flux(0.4), oscillator_operators(60, kDevice1.e_c,
                                                                       kDevice1.e_l)
                                                      .charge,
                              5);
    }();
    const ResonatorParams r{6.08, 8400.0, 0.0};
    const int n_fock = 4;
    const HamiltonianMatrix h = couple_resonator(qubit.h, qubit.charge, r, n_fock);
    const EigenSolution sol = diagonalize(h, 5 * n_fock);
    std::vector<double> expected;
    for (int i = 0; i < 5; ++i)
        for (int m = 0; m < n_fock; ++m) expected.push_back(qubit.energies(i) + m * r.omega_r);
    std::sort(expected.begin(), expected.end());
    for (int i = 0; i < 5 * n_fock; ++i)
        CHECK(sol.energies(i) == doctest::Approx(expected[i]).epsilon(1e-12));
}

TEST_CASE("dispersive regime matches second-order perturbation theory") {
    const SingleModeBasis basis = make_single_mode_basis(kDevice1, 60);
    const ProjectedSystem qubit = project_lowest(
        basis.at_flux(0.9), oscillator_operators(60, kDevice1.e_c, kDevice1.e_l).charge, 6);
    const ResonatorParams r{6.08, 8400.0, 0.1};
    const int n_fock = 6;
    const HamiltonianMatrix h = couple_resonator(qubit.h, qubit.charge, r, n_fock);
    const EigenSolution sol = diagonalize(h, 3);

    // Dressed resonator shift for the qubit ground state.
    const double e00 = oracles::perturbative_dressed_energy(qubit.energies, qubit.charge,
                                                            r.omega_r, r.g, 0, 0, n_fock);
    const double e01 = oracles::perturbative_dressed_energy(qubit.energies, qubit.charge,
                                                            r.omega_r, r.g, 0, 1, n_fock);
    const double shift_pt = (e01 - e00) - r.omega_r;

    // Locate the dressed (0,0) and (0,1) states by adiabatic ordering: with
    // the qubit far detuned they are the lowest state and the state nearest
    // omega_r above it.
    const double e_dressed0 = sol.energies(0);
    double best = 1e18;
    double e_dressed1 = 0.0;
    for (int i = 1; i < 3; ++i) {
        const double de = sol.energies(i) - e_dressed0;
        if (std::abs(de - r.omega_r) < best) {
            best = std::abs(de - r.omega_r);
            e_dressed1 = sol.energies(i);
        }
    }
    const double shift_full = (e_dressed1 - e_dressed0) - r.omega_r;
    CHECK(shift_full == doctest::Approx(shift_pt).epsilon(0.05));
}

TEST_CASE("resonator linewidth from loaded quality factor") {
    const ResonatorParams r{6.08, 8400.0, 0.1};
    CHECK(r.kappa() * 1e9 == doctest::Approx(723.8e3).epsilon(1e-3));
}

TEST_CASE("dimension cap guards the coupled problem") {
    const ProjectedSystem qubit = [] {
        const SingleModeBasis basis = make_single_mode_basis(kDevice1, 40);
        return project_lowest(basis.at_flux(0.0),
                              oscillator_operators(40, kDevice1.e_c, kDevice1.e_l).charge, 10);
    }();
    const ResonatorParams r{6.08, 8400.0, 0.05};
    CHECK_THROWS_AS(couple_resonator(qubit.h, qubit.charge, r, 40, 128), ParameterError);
}
