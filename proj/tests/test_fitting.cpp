#include "doctest.h"

#include <algorithm>
#include <random>

#include "fluxline/fitting.hpp"

using namespace fluxline;

namespace {
const SingleModeParams kDevice1{0.89, 1.37, 10.95};

std::vector<double> fit_flux_grid() {
    std::vector<double> grid;
    for (int i = 0; i < 13; ++i) grid.push_back(-M_PI + i * (1.3 * M_PI) / 12.0);
    return grid;
}
} // namespace

TEST_CASE("synthesis: noiseless points sit on model lines, seeds reproduce bits") {
    const auto grid = fit_flux_grid();
    const SpectroscopyDataset clean = synthesize_spectroscopy(kDevice1, grid, 0.0, 42);
    SingleModeFitOptions fopts;
    // Every clean point must coincide with a cataloged line of the truth model.
    SweepOptions sopts;
    sopts.levels = 7;
    const SweepResult sweep = flux_sweep(kDevice1, grid, sopts);
    for (const auto& pt : clean.points) {
        double best = 1e18;
        for (const auto& sp : sweep.points) {
            if (sp.phi_ext != pt.phi_ext) continue;
            for (const auto& t : sp.transitions)
                best = std::min(best, std::abs(t.frequency - pt.freq));
        }
        CHECK(best < 1e-10);
    }

    const SpectroscopyDataset again = synthesize_spectroscopy(kDevice1, grid, 0.01, 42);
    const SpectroscopyDataset third = synthesize_spectroscopy(kDevice1, grid, 0.01, 42);
    REQUIRE(again.points.size() == third.points.size());
    for (std::size_t i = 0; i < again.points.size(); ++i)
        CHECK(again.points[i].freq == third.points[i].freq);
}

TEST_CASE("synthesis: empirical noise spread matches the requested sigma") {
    std::vector<double> grid;
    for (int i = 0; i < 40; ++i) grid.push_back(-M_PI + i * (1.6 * M_PI) / 39.0);
    const double sigma = 0.02;
    const SpectroscopyDataset noisy = synthesize_spectroscopy(kDevice1, grid, sigma, 7);
    const SpectroscopyDataset clean = synthesize_spectroscopy(kDevice1, grid, 0.0, 7);
    REQUIRE(noisy.points.size() == clean.points.size());
    REQUIRE(noisy.points.size() >= 200);
    double ss = 0.0;
    for (std::size_t i = 0; i < noisy.points.size(); ++i) {
        const double d = noisy.points[i].freq - clean.points[i].freq;
        ss += d * d;
    }
    const double rms = std::sqrt(ss / noisy.points.size());
    CHECK(std::abs(rms - sigma) / sigma < 0.10);
}

TEST_CASE("single-mode fit: noiseless recovery to optimizer tolerance") {
    const SpectroscopyDataset data = synthesize_spectroscopy(kDevice1, fit_flux_grid(), 0.0, 3);
    SingleModeParams init{0.80, 1.55, 9.4}; // ~15% off
    SingleModeFitOptions opts;
    opts.simplex.restarts = 2;
    opts.simplex.threads = 2;
    const FitReport report = fit_single_mode(data, init, false, opts);
    const auto& p = std::get<SingleModeParams>(report.params);
    CHECK(std::abs(p.e_c - kDevice1.e_c) / kDevice1.e_c < 1e-4);
    CHECK(std::abs(p.e_l - kDevice1.e_l) / kDevice1.e_l < 1e-4);
    CHECK(std::abs(p.e_j - kDevice1.e_j) / kDevice1.e_j < 1e-4);
    CHECK(report.residual_rms < 1e-6);
}

TEST_CASE("single-mode fit: permutation invariance of the dataset") {
    SpectroscopyDataset data = synthesize_spectroscopy(kDevice1, fit_flux_grid(), 0.01, 5);
    SingleModeFitOptions opts;
    opts.simplex.restarts = 2;
    const SingleModeParams init{0.85, 1.45, 10.0};
    const FitReport a = fit_single_mode(data, init, false, opts);
    std::mt19937_64 rng(11);
    std::shuffle(data.points.begin(), data.points.end(), rng);
    const FitReport b = fit_single_mode(data, init, false, opts);
    const auto& pa = std::get<SingleModeParams>(a.params);
    const auto& pb = std::get<SingleModeParams>(b.params);
    CHECK(pa.e_c == pb.e_c);
    CHECK(pa.e_l == pb.e_l);
    CHECK(pa.e_j == pb.e_j);
}

TEST_CASE("fit preconditions") {
    SpectroscopyDataset tiny;
    tiny.points.push_back({0.0, 5.0, 1, std::nullopt, 1.0});
    CHECK_THROWS_AS(fit_single_mode(tiny, kDevice1, false), ParameterError);

    SpectroscopyDataset narrow;
    for (int i = 0; i < 6; ++i) narrow.points.push_back({0.01 * i, 5.0, 1, std::nullopt, 1.0});
    CHECK_THROWS_AS(fit_single_mode(narrow, kDevice1, false), ParameterError);
}

TEST_CASE("two-mode fit: one-dimensional e_j slice matches a golden-section scan") {
    CircuitTopology topo;
    topo.l_nw = 121e-9;
    topo.c_nw = 35.4e-15;
    topo.c_0 = topo.c_g = 1e-15;
    topo.c_j = 4e-15;
    topo.n_cells = 64;
    const double e_j_truth = 10.95;

    TwoModeFitOptions opts;
    opts.dims = {22, 8};
    opts.levels = 6;

    std::vector<double> grid;
    for (int i = 0; i < 7; ++i) grid.push_back(-0.9 * M_PI + i * (0.8 * M_PI) / 6.0);
    const TwoModeParams truth = two_mode_from_topology(topo, e_j_truth);
    SynthesisOptions syn;
    syn.dims = opts.dims;
    syn.levels = opts.levels;
    const SpectroscopyDataset data = synthesize_spectroscopy(truth, grid, 0.0, 9, syn);

    // Free only e_j.
    TwoModeFitMask mask;
    mask.l_nw = mask.c_nw = mask.c_j = mask.c_0 = mask.c_g = false;
    mask.e_j = true;
    TwoModeFitOptions fit_opts = opts;
    fit_opts.e_j_init = 9.5;
    fit_opts.simplex.restarts = 1;
    fit_opts.simplex.max_iterations = 60;
    const FitReport report = fit_two_mode(data, topo, mask, fit_opts);
    const double e_j_fit = std::get<TwoModeParams>(report.params).e_j;

    // Independent golden-section scan of the same 1D objective.
    auto objective = [&](double e_j) {
        SweepOptions sweep_opts;
        sweep_opts.levels = opts.levels;
        sweep_opts.dims = opts.dims;
        const TwoModeParams p = two_mode_from_topology(topo, e_j);
        const SweepResult sweep = flux_sweep(p, grid, sweep_opts);
        double ssq = 0.0;
        for (const auto& pt : data.points) {
            double best = 0.8;
            for (const auto& sp : sweep.points) {
                if (sp.phi_ext != pt.phi_ext) continue;
                for (const auto& t : sp.transitions)
                    if (std::abs(t.frequency - pt.freq) < std::abs(best))
                        best = t.frequency - pt.freq;
            }
            ssq += best * best;
        }
        return ssq;
    };
    double a = 9.5, b = 12.5;
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = objective(c), fd = objective(d);
    for (int it = 0; it < 25; ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = objective(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = objective(d);
        }
    }
    const double e_j_scan = 0.5 * (a + b);
    CHECK(std::abs(e_j_fit - e_j_scan) < 0.02);
    CHECK(std::abs(e_j_fit - e_j_truth) < 0.05);
}
