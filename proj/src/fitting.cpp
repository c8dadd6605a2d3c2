#include "fluxline/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

namespace fluxline {

namespace {

// Distinct raw flux values with the data indices they carry.
std::vector<std::pair<double, std::vector<int>>> group_by_flux(const SpectroscopyDataset& data) {
    std::map<double, std::vector<int>> groups;
    for (int i = 0; i < static_cast<int>(data.points.size()); ++i)
        groups[data.points[i].phi_ext].push_back(i);
    return {groups.begin(), groups.end()};
}

double point_residual(const SpectroscopyPoint& pt, const std::vector<TransitionRecord>& catalog,
                      const LabeledSpectrum* labeled, double gate) {
    if (pt.label_hint && labeled) {
        const int ia = labeled->index_of(pt.label_hint->first);
        const int ib = labeled->index_of(pt.label_hint->second);
        if (ia >= 0 && ib >= 0) {
            const double model =
                std::abs(labeled->energies(ib) - labeled->energies(ia)) / pt.photon_order;
            return pt.freq - model;
        }
    }
    double best = gate;
    for (const auto& t : catalog) {
        const double r = pt.freq - t.frequency;
        if (std::abs(r) < std::abs(best)) best = r;
    }
    return std::clamp(best, -gate, gate);
}

struct ObjectiveStats {
    double weighted_ssq = 0.0;
    std::vector<double> residuals;
};

} // namespace

FitReport fit_single_mode(const SpectroscopyDataset& data, const SingleModeParams& init,
                          bool flux_cal, const SingleModeFitOptions& opts) {
    data.validate();
    init.validate();
    if (data.points.size() < 5)
        throw ParameterError("fit_single_mode: need at least 5 points");
    {
        double lo = data.points[0].phi_ext, hi = lo;
        for (const auto& p : data.points) {
            lo = std::min(lo, p.phi_ext);
            hi = std::max(hi, p.phi_ext);
        }
        if (hi - lo < 0.3 * 2.0 * M_PI)
            throw ParameterError("fit_single_mode: data must span at least 0.3 flux quanta");
    }

    const auto groups = group_by_flux(data);

    auto evaluate = [&](const SingleModeParams& p, double offset,
                        double scale) -> ObjectiveStats {
        ObjectiveStats stats;
        stats.residuals.assign(data.points.size(), 0.0);
        const SingleModeBasis basis = make_single_mode_basis(p, opts.dim);
        for (const auto& [phi_raw, indices] : groups) {
            const double phi = offset + scale * phi_raw;
            const EigenSolution sol = diagonalize(basis.at_flux(phi), opts.levels);
            const LabeledSpectrum s = label_states(sol, p, FluxBias{phi});
            const auto catalog = transition_catalog(s, opts.max_photon, opts.catalog);
            for (int i : indices) {
                const double r =
                    point_residual(data.points[i], catalog, &s, opts.assignment_gate);
                stats.residuals[i] = r;
                stats.weighted_ssq += data.points[i].weight * r * r;
            }
        }
        return stats;
    };

    const int n_model = 3 + (flux_cal ? 2 : 0);
    Eigen::VectorXd x0 = Eigen::VectorXd::Zero(n_model);
    Eigen::VectorXd step = Eigen::VectorXd::Zero(n_model);
    x0(0) = std::log(init.e_c);
    x0(1) = std::log(init.e_l);
    x0(2) = std::log(init.e_j);
    step.head(3).setConstant(0.08);
    if (flux_cal) {
        step(3) = 0.03; // flux offset, rad
        step(4) = 0.01; // log flux scale
    }

    auto objective = [&](const Eigen::VectorXd& x) {
        SingleModeParams p{std::exp(x(0)), std::exp(x(1)), std::exp(x(2))};
        const double offset = flux_cal ? x(3) : 0.0;
        const double scale = flux_cal ? std::exp(x(4)) : 1.0;
        try {
            return evaluate(p, offset, scale).weighted_ssq;
        } catch (const std::exception&) {
            return 1e12; // infeasible corner of parameter space
        }
    };

    const SimplexResult best = nelder_mead_restarts(objective, x0, step, opts.simplex);

    FitReport report;
    SingleModeParams fitted{std::exp(best.x(0)), std::exp(best.x(1)), std::exp(best.x(2))};
    report.params = fitted;
    report.flux_offset = flux_cal ? best.x(3) : 0.0;
    report.flux_scale = flux_cal ? std::exp(best.x(4)) : 1.0;
    report.iterations = best.iterations;
    report.converged = best.converged;
    const ObjectiveStats stats = evaluate(fitted, report.flux_offset, report.flux_scale);
    report.residuals = stats.residuals;
    double ssq = 0.0;
    for (double r : stats.residuals) ssq += r * r;
    report.residual_rms = std::sqrt(ssq / stats.residuals.size());
    return report;
}

FitReport fit_two_mode(const SpectroscopyDataset& data, const CircuitTopology& topo0,
                       const TwoModeFitMask& free_mask, const TwoModeFitOptions& opts) {
    data.validate();
    topo0.validate();

    std::vector<int> free_ids; // 0 l_nw, 1 c_nw, 2 c_j, 3 e_j, 4 c_0, 5 c_g
    if (free_mask.l_nw) free_ids.push_back(0);
    if (free_mask.c_nw) free_ids.push_back(1);
    if (free_mask.c_j) free_ids.push_back(2);
    if (free_mask.e_j) free_ids.push_back(3);
    if (free_mask.c_0) free_ids.push_back(4);
    if (free_mask.c_g) free_ids.push_back(5);
    if (free_ids.empty()) throw ParameterError("fit_two_mode: no free parameters");

    const auto groups = group_by_flux(data);
    std::vector<double> flux_values;
    for (const auto& [phi, _] : groups) flux_values.push_back(phi);

    auto unpack = [&](const Eigen::VectorXd& x, CircuitTopology& topo, double& e_j) {
        topo = topo0;
        e_j = opts.e_j_init;
        for (int i = 0; i < static_cast<int>(free_ids.size()); ++i) {
            const double v = std::exp(x(i));
            switch (free_ids[i]) {
                case 0: topo.l_nw = v; break;
                case 1: topo.c_nw = v; break;
                case 2: topo.c_j = v; break;
                case 3: e_j = v; break;
                case 4: topo.c_0 = v; break;
                case 5: topo.c_g = v; break;
            }
        }
    };

    SweepOptions sweep_opts;
    sweep_opts.levels = opts.levels;
    sweep_opts.max_photon = opts.max_photon;
    sweep_opts.dims = opts.dims;
    sweep_opts.catalog = opts.catalog;

    auto evaluate = [&](const CircuitTopology& topo, double e_j) -> ObjectiveStats {
        ObjectiveStats stats;
        stats.residuals.assign(data.points.size(), 0.0);
        const TwoModeParams p = two_mode_from_topology(topo, e_j);
        const SweepResult sweep = flux_sweep(p, flux_values, sweep_opts);
        for (std::size_t g = 0; g < groups.size(); ++g) {
            const auto& pt_sweep = sweep.points[g];
            if (!pt_sweep.ok)
                throw NumericalError("fit_two_mode: sweep failure: " + pt_sweep.diagnostic);
            for (int i : groups[g].second) {
                const double r = point_residual(data.points[i], pt_sweep.transitions, nullptr,
                                                opts.assignment_gate);
                stats.residuals[i] = r;
                stats.weighted_ssq += data.points[i].weight * r * r;
            }
        }
        return stats;
    };

    Eigen::VectorXd x0(free_ids.size()), step(free_ids.size());
    for (int i = 0; i < static_cast<int>(free_ids.size()); ++i) {
        double v0 = 0.0;
        switch (free_ids[i]) {
            case 0: v0 = topo0.l_nw; break;
            case 1: v0 = topo0.c_nw; break;
            case 2: v0 = topo0.c_j; break;
            case 3: v0 = opts.e_j_init; break;
            case 4: v0 = topo0.c_0; break;
            case 5: v0 = topo0.c_g; break;
        }
        if (!(v0 > 0.0)) throw ParameterError("fit_two_mode: free parameters need positive inits");
        x0(i) = std::log(v0);
        step(i) = 0.06;
    }

    auto objective = [&](const Eigen::VectorXd& x) {
        CircuitTopology topo;
        double e_j = 0.0;
        unpack(x, topo, e_j);
        try {
            return evaluate(topo, e_j).weighted_ssq;
        } catch (const std::exception&) {
            return 1e12;
        }
    };

    const SimplexResult best = nelder_mead_restarts(objective, x0, step, opts.simplex);

    CircuitTopology topo;
    double e_j = 0.0;
    unpack(best.x, topo, e_j);

    FitReport report;
    const TwoModeParams fitted = two_mode_from_topology(topo, e_j);
    report.params = fitted;
    report.iterations = best.iterations;
    report.converged = best.converged;
    report.fitted_l_nw = topo.l_nw;
    report.fitted_z_nw = topo.z_nw();
    const ObjectiveStats stats = evaluate(topo, e_j);
    report.residuals = stats.residuals;
    double ssq = 0.0;
    for (double r : stats.residuals) ssq += r * r;
    report.residual_rms = std::sqrt(ssq / stats.residuals.size());

    // Flag when the second antisymmetric branch left the measured window.
    double f_max = 0.0;
    for (const auto& p : data.points) f_max = std::max(f_max, p.freq);
    const double f_mode1 =
        1e-9 / (2.0 * M_PI * std::sqrt(fitted.l_eff[1] * fitted.c_eff[1] /
                                       (1.0 + fitted.l_eff[1] / fitted.l_j)));
    report.high_branch_out_of_window = f_mode1 > f_max + opts.assignment_gate;
    return report;
}

namespace {

SpectroscopyDataset synthesize_from_sweep(const SweepResult& sweep, double noise_sigma,
                                          std::uint64_t seed, const SynthesisOptions& opts) {
    SpectroscopyDataset data;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, 1.0);
    for (const auto& pt : sweep.points) {
        if (!pt.ok) continue;
        for (const auto& t : pt.transitions) {
            if (t.dipole_n < opts.min_dipole) continue;
            if (t.frequency <= 0.05 || t.frequency > opts.max_freq) continue;
            // Delocalized endpoints (hybridized pairs at half flux) make the
            // line assignment ambiguous; skip them in synthetic datasets.
            if (t.from.delocalized || t.to.delocalized) continue;
            SpectroscopyPoint p;
            p.phi_ext = pt.phi_ext;
            p.freq = t.frequency + (noise_sigma > 0.0 ? noise_sigma * noise(rng) : 0.0);
            p.photon_order = t.photon_order;
            if (opts.with_hints) p.label_hint = std::make_pair(t.from, t.to);
            data.points.push_back(p);
        }
    }
    if (data.points.empty())
        throw NumericalError("synthesize_spectroscopy: no visible lines in the window");
    return data;
}

} // namespace

SpectroscopyDataset synthesize_spectroscopy(const SingleModeParams& p,
                                            const std::vector<double>& flux_grid,
                                            double noise_sigma, std::uint64_t seed,
                                            const SynthesisOptions& opts) {
    SweepOptions sweep_opts;
    sweep_opts.levels = opts.levels;
    sweep_opts.max_photon = opts.max_photon;
    sweep_opts.dim = opts.dim;
    sweep_opts.catalog = opts.catalog;
    return synthesize_from_sweep(flux_sweep(p, flux_grid, sweep_opts), noise_sigma, seed, opts);
}

SpectroscopyDataset synthesize_spectroscopy(const TwoModeParams& p,
                                            const std::vector<double>& flux_grid,
                                            double noise_sigma, std::uint64_t seed,
                                            const SynthesisOptions& opts) {
    SweepOptions sweep_opts;
    sweep_opts.levels = opts.levels;
    sweep_opts.max_photon = opts.max_photon;
    sweep_opts.dims = opts.dims;
    sweep_opts.catalog = opts.catalog;
    return synthesize_from_sweep(flux_sweep(p, flux_grid, sweep_opts), noise_sigma, seed, opts);
}

} // namespace fluxline
