#include "doctest.h"

#include "fluxline/spectra.hpp"

using namespace fluxline;

namespace {
const SingleModeParams kDevice1{0.89, 1.37, 10.95};
const SingleModeParams kDevice2{0.56, 0.52, 16.16};
const SingleModeParams kDevice3{1.90, 0.53, 5.90};

LabeledSpectrum labeled(const SingleModeParams& p, double flux, int k, int dim = 70) {
    const EigenSolution sol = diagonalize(build_single_mode_hamiltonian(p, FluxBias{flux}, dim), k);
    return label_states(sol, p, FluxBias{flux});
}
} // namespace

TEST_CASE("label rendering and parsing round trip") {
    for (const char* text : {"g0", "e-1", "f2", "h-3", "i1"}) {
        CHECK(parse_label(text).str() == text);
    }
    CHECK(parse_label("h0*").rank == 3);
    CHECK_THROWS_AS(parse_label("a1"), ParameterError);
    CHECK_THROWS_AS(parse_label(""), ParameterError);
}

TEST_CASE("wells of device 1 at -0.38 pi sit near -2 pi and 0") {
    const PotentialWells wells = find_wells(kDevice1, -0.38 * M_PI);
    REQUIRE(wells.minima.size() >= 2);
    REQUIRE(wells.barriers.size() == wells.minima.size() - 1);
    int i_m1 = -1, i_0 = -1;
    for (std::size_t i = 0; i < wells.indices.size(); ++i) {
        if (wells.indices[i] == -1) i_m1 = static_cast<int>(i);
        if (wells.indices[i] == 0) i_0 = static_cast<int>(i);
    }
    REQUIRE(i_m1 >= 0);
    REQUIRE(i_0 >= 0);
    CHECK(std::abs(wells.minima[i_m1] + 2.0 * M_PI) < 2.0);
    CHECK(std::abs(wells.minima[i_0]) < 2.0);
    CHECK(wells.barriers[i_m1] > wells.minima[i_m1]);
    CHECK(wells.barriers[i_m1] < wells.minima[i_0]);
    // Barrier assignment: basin boundaries split the two minima.
    CHECK(wells.basin_of(wells.minima[i_m1]) == i_m1);
    CHECK(wells.basin_of(wells.minima[i_0]) == i_0);
}

TEST_CASE("zero Josephson energy leaves a single global well") {
    SingleModeParams p = kDevice1;
    p.e_j = 1e-12;
    const LabeledSpectrum s = labeled(p, 0.7, 5, 40);
    for (int i = 0; i < 5; ++i) {
        CHECK(s.labels[i].well_index == 0);
        CHECK(s.labels[i].rank == i);
        CHECK_FALSE(s.labels[i].delocalized);
    }
}

TEST_CASE("deep-well device 2 at -0.46 pi: barrier-top states bridge the wells") {
    const LabeledSpectrum s = labeled(kDevice2, -0.46 * M_PI, 14, 120);
    // The plasmon chain sits well below the barrier and stays localized.
    for (const char* name : {"g0", "e0", "f0"}) {
        const int idx = s.index_of(parse_label(name));
        REQUIRE(idx >= 0);
        CHECK_FALSE(s.labels[idx].delocalized);
    }
    // h0 is the population-transfer bridge: it keeps a sizable interwell
    // dipole to e-1 even though its probability mass stays mostly in well 0.
    const int h0 = s.index_of(parse_label("h0"));
    const int em1 = s.index_of(parse_label("e-1"));
    REQUIRE(h0 >= 0);
    REQUIRE(em1 >= 0);
    CHECK(std::abs(s.n_elements(h0, em1)) > 0.01);
    // States reaching the barrier top are flagged rather than force-assigned.
    bool any_delocalized = false;
    for (const auto& l : s.labels) any_delocalized |= l.delocalized;
    CHECK(any_delocalized);
}

TEST_CASE("labels are stable under basis doubling") {
    // Delocalized states carry no unique well claim, so only localized labels
    // are compared one-to-one.
    for (double flux : {0.0, -0.38 * M_PI, -0.46 * M_PI}) {
        const LabeledSpectrum a = labeled(kDevice1, flux, 8, 70);
        const LabeledSpectrum b = labeled(kDevice1, flux, 8, 140);
        for (int i = 0; i < 8; ++i) {
            CHECK(a.labels[i].delocalized == b.labels[i].delocalized);
            if (a.labels[i].delocalized) continue;
            CHECK(a.labels[i].well_index == b.labels[i].well_index);
            CHECK(a.labels[i].rank == b.labels[i].rank);
        }
    }
}

TEST_CASE("parity selection at symmetric flux points") {
    for (double flux : {0.0, M_PI}) {
        const LabeledSpectrum s = labeled(kDevice1, flux, 8, 90);
        const int g0 = s.index_of(parse_label("g0"));
        const int f0 = s.index_of(parse_label("f0"));
        REQUIRE(g0 >= 0);
        if (f0 >= 0) {
            CHECK(std::abs(s.n_elements(g0, f0)) < 1e-10);
            CHECK(std::abs(s.phi_elements(g0, f0)) < 1e-10);
        }
    }
}

TEST_CASE("transition catalog: two-photon route to f0 at zero flux") {
    const LabeledSpectrum s = labeled(kDevice1, 0.0, 6, 90);
    const auto catalog = transition_catalog(s, 2);
    const StateLabel g0 = parse_label("g0"), f0 = parse_label("f0"), e0 = parse_label("e0");
    bool f0_order1 = false, f0_order2 = false, e0_order1 = false;
    for (const auto& t : catalog) {
        if (t.from == g0 && t.to == f0 && t.photon_order == 1) f0_order1 = true;
        if (t.from == g0 && t.to == f0 && t.photon_order == 2) f0_order2 = true;
        if (t.from == g0 && t.to == e0 && t.photon_order == 1) e0_order1 = true;
    }
    CHECK_FALSE(f0_order1);
    CHECK(f0_order2);
    CHECK(e0_order1);
}

TEST_CASE("catalog frequencies equal energy differences") {
    const LabeledSpectrum s = labeled(kDevice2, -0.46 * M_PI, 8, 90);
    const auto catalog = transition_catalog(s, 3);
    for (const auto& t : catalog) {
        const int i = s.index_of(t.from), j = s.index_of(t.to);
        REQUIRE(i >= 0);
        REQUIRE(j >= 0);
        CHECK(std::abs(t.frequency * t.photon_order - (s.energies(j) - s.energies(i))) < 1e-12);
    }
}

TEST_CASE("plasmon dipoles are strong, fluxon dipoles fade with deeper wells") {
    const LabeledSpectrum s = labeled(kDevice2, -0.46 * M_PI, 8, 90);
    const int g0 = s.index_of(parse_label("g0"));
    const int e0 = s.index_of(parse_label("e0"));
    REQUIRE(g0 >= 0);
    REQUIRE(e0 >= 0);
    CHECK(std::abs(s.n_elements(g0, e0)) > 0.1);

    SingleModeParams p = kDevice3;
    double prev = 1e9;
    for (double e_j : {5.9, 10.0, 16.0, 24.0}) {
        p.e_j = e_j;
        const LabeledSpectrum sp = labeled(p, -0.46 * M_PI, 8, 110);
        const int a = sp.index_of(parse_label("g0"));
        const int b = sp.index_of(parse_label("g-1"));
        REQUIRE(a >= 0);
        REQUIRE(b >= 0);
        const double dip = std::abs(sp.n_elements(a, b));
        CHECK(dip < prev);
        prev = dip;
    }
}

TEST_CASE("thermally reachable initial states appear near half flux") {
    // Near half flux the two well ground states are close; both feed lines.
    const LabeledSpectrum s = labeled(kDevice3, -0.98 * M_PI, 6, 90);
    CatalogOptions opts;
    opts.temperature_k = 0.020;
    const auto catalog = transition_catalog(s, 1, opts);
    bool from_second_state = false;
    for (const auto& t : catalog)
        if (s.index_of(t.from) == 1) from_second_state = true;
    CHECK(from_second_state);
}

TEST_CASE("flux sweep: periodicity and deterministic parallelism") {
    const std::vector<double> grid{-0.7, -0.2, 0.4, 0.4 + 2.0 * M_PI};
    SweepOptions opts;
    opts.levels = 6;
    opts.dim = 60;
    opts.threads = 1;
    const SweepResult serial = flux_sweep(kDevice1, grid, opts);
    opts.threads = 4;
    const SweepResult parallel = flux_sweep(kDevice1, grid, opts);

    REQUIRE(serial.points.size() == grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        REQUIRE(serial.points[i].ok);
        REQUIRE(serial.points[i].transitions.size() == parallel.points[i].transitions.size());
        for (std::size_t t = 0; t < serial.points[i].transitions.size(); ++t) {
            CHECK(serial.points[i].transitions[t].frequency ==
                  parallel.points[i].transitions[t].frequency);
            CHECK(serial.points[i].transitions[t].dipole_n ==
                  parallel.points[i].transitions[t].dipole_n);
        }
    }

    // 2 pi periodicity of the cataloged lines.
    const auto& a = serial.points[2].transitions;
    const auto& b = serial.points[3].transitions;
    REQUIRE(a.size() == b.size());
    for (std::size_t t = 0; t < a.size(); ++t)
        CHECK(std::abs(a[t].frequency - b[t].frequency) < 1e-9);
}

TEST_CASE("sweep survives a failing point without aborting") {
    SweepOptions opts;
    opts.levels = 200; // exceeds the basis dimension at dim=60
    opts.dim = 60;
    const SweepResult sweep = flux_sweep(kDevice1, {0.1, 0.2}, opts);
    for (const auto& pt : sweep.points) {
        CHECK_FALSE(pt.ok);
        CHECK_FALSE(pt.diagnostic.empty());
    }
}

TEST_CASE("sidebands: tensor sums at g=0 and repulsion at g>0") {
    const int dim = 60, k = 4, n_fock = 3;
    const SingleModeBasis basis = make_single_mode_basis(kDevice1, dim);
    const double flux = 0.9;
    const LabeledSpectrum s = labeled(kDevice1, flux, k, dim);
    const ProjectedSystem qubit = project_lowest(
        basis.at_flux(flux), oscillator_operators(dim, kDevice1.e_c, kDevice1.e_l).charge, k);
    const ResonatorParams r0{6.08, 8400.0, 0.0};

    const auto lines0 = sideband_lines(couple_resonator(qubit.h, qubit.charge, r0, n_fock), r0, s);
    REQUIRE(!lines0.empty());
    for (const auto& line : lines0) {
        const int j = s.index_of(line.to);
        REQUIRE(j >= 0);
        const double expected = s.energies(j) - s.energies(0) + r0.omega_r;
        CHECK(line.frequency == doctest::Approx(expected).epsilon(1e-12));
        CHECK(line.kind == TransitionKind::sideband);
    }

    // Repulsion from the bare crossing grows monotonically with g.
    auto displacement = [&](double g) {
        const ResonatorParams r{6.08, 8400.0, g};
        const auto lines =
            sideband_lines(couple_resonator(qubit.h, qubit.charge, r, n_fock), r, s);
        double best = 1e18;
        for (const auto& line : lines) {
            const int j = s.index_of(line.to);
            const double bare = s.energies(j) - s.energies(0) + r.omega_r;
            best = std::min(best, std::abs(line.frequency - bare));
        }
        return best;
    };
    const double d1 = displacement(0.05), d2 = displacement(0.10);
    CHECK(d1 > 0.0);
    CHECK(d2 > d1);

    // Far from resonance the sideband branch rides one resonator quantum
    // above the plasmon branch.
    const int e0 = s.index_of(parse_label("e0"));
    REQUIRE(e0 >= 0);
    double nearest = 1e18;
    for (const auto& line : lines0)
        if (s.index_of(line.to) == e0)
            nearest = std::min(nearest,
                               std::abs(line.frequency - (s.energies(e0) - s.energies(0))));
    CHECK(nearest == doctest::Approx(6.08).epsilon(1e-9));
}
