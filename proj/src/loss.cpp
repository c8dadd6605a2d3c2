#include "fluxline/loss.hpp"

#include <algorithm>
#include <cmath>

#include "fluxline/parallel.hpp"
#include "fluxline/simplex.hpp"

namespace fluxline {

double thermal_factor(double f_ghz, double temperature_k) {
    if (!(f_ghz > 0.0)) throw ParameterError("thermal_factor: frequency must be positive");
    if (temperature_k < 0.0) throw ParameterError("thermal_factor: temperature must be >= 0");
    if (temperature_k == 0.0) return 2.0;
    const double x = constants::h_planck * f_ghz * 1e9 /
                     (2.0 * constants::k_boltzmann * temperature_k);
    if (x > 20.0) return 2.0; // coth saturates to 1 well below double precision
    return 1.0 / std::tanh(x) + 1.0;
}

double gamma_inductive(double e_l_ghz, double omega_q_ghz, double mat_elem_sq,
                       const LossModel& m) {
    m.validate();
    if (!(omega_q_ghz > 0.0)) throw ParameterError("gamma_inductive: omega_q must be positive");
    // E_L/(hbar Q_L) = 2 pi E_L[Hz]/Q_L
    return 2.0 * M_PI * e_l_ghz * 1e9 / m.q_l * thermal_factor(omega_q_ghz, m.temperature) *
           mat_elem_sq;
}

double gamma_capacitive(double e_c_ghz, double omega_q_ghz, double mat_elem_sq,
                        const LossModel& m) {
    m.validate();
    if (!(omega_q_ghz > 0.0)) throw ParameterError("gamma_capacitive: omega_q must be positive");
    // hbar w_q^2 / (8 E_C Q_C) = 2 pi f_q^2[Hz] / (8 E_C[Hz] Q_C)
    return 2.0 * M_PI * omega_q_ghz * omega_q_ghz * 1e9 / (8.0 * e_c_ghz * m.q_c) *
           thermal_factor(omega_q_ghz, m.temperature) * mat_elem_sq;
}

double gamma_purcell(double g_ghz, double delta_ghz, double kappa_ghz) {
    if (delta_ghz == 0.0)
        throw NumericalError("gamma_purcell: resonant regime (delta = 0); rate diverges");
    const double ratio = g_ghz / delta_ghz;
    return ratio * ratio * kappa_ghz * 1e9;
}

namespace {

// Fluxon transition from the ground state: the lowest excited state in a
// different well, or a delocalized partner near half flux.
int find_fluxon_partner(const LabeledSpectrum& s) {
    for (int j = 1; j < s.size(); ++j) {
        if (s.labels[j].well_index != s.labels[0].well_index) return j;
        if (s.labels[0].delocalized || s.labels[j].delocalized) return j;
    }
    return -1;
}

} // namespace

std::vector<T1Point> t1_curve(const SingleModeParams& p, const LossModel& m,
                              const std::vector<double>& flux_grid, const T1CurveOptions& opts) {
    p.validate();
    m.validate();
    const SingleModeBasis basis = make_single_mode_basis(p, opts.dim);
    std::vector<T1Point> out(flux_grid.size());
    parallel_for(flux_grid.size(), opts.threads, [&](std::size_t idx) {
        T1Point& pt = out[idx];
        pt.phi_ext = flux_grid[idx];
        try {
            const EigenSolution sol = diagonalize(basis.at_flux(pt.phi_ext), opts.levels);
            const LabeledSpectrum s =
                label_states(sol, p, FluxBias{pt.phi_ext}, opts.label);
            const int j = find_fluxon_partner(s);
            if (j < 0) {
                pt.ok = false;
                pt.diagnostic = "no fluxon transition at this flux";
                return;
            }
            pt.omega_q = s.energies(j) - s.energies(0);
            pt.mat_elem_sq = std::norm(s.phi_elements(0, j));
            const double ind = gamma_inductive(p.e_l, pt.omega_q, pt.mat_elem_sq, m);
            const double cap = gamma_capacitive(p.e_c, pt.omega_q, pt.mat_elem_sq, m);
            double purcell = 0.0;
            if (opts.resonator) {
                const double delta = pt.omega_q - opts.resonator->omega_r;
                if (delta != 0.0)
                    purcell = gamma_purcell(opts.resonator->g, delta, opts.resonator->kappa());
            }
            pt.rates = RateResult::compose(ind, cap, purcell);
        } catch (const std::exception& e) {
            pt.ok = false;
            pt.diagnostic = e.what();
        }
    });
    return out;
}

double FluxonBranch::mat_elem_sq(double f_q) const {
    if (table.size() < 2) throw NumericalError("FluxonBranch: empty table");
    if (f_q <= table.front().first) return table.front().second;
    if (f_q >= table.back().first) return table.back().second;
    const auto hi = std::lower_bound(table.begin(), table.end(), std::make_pair(f_q, 0.0));
    const auto lo = hi - 1;
    const double w = (f_q - lo->first) / (hi->first - lo->first);
    return lo->second * (1.0 - w) + hi->second * w;
}

double FluxonBranch::t1(double f_q, const SingleModeParams& p, const LossModel& m) const {
    const double msq = mat_elem_sq(f_q);
    return 1.0 / (gamma_inductive(p.e_l, f_q, msq, m) + gamma_capacitive(p.e_c, f_q, msq, m));
}

FluxonBranch tabulate_fluxon_branch(const SingleModeParams& p, const LossModel& m,
                                    const T1CurveOptions& opts) {
    std::vector<double> grid;
    const int n_grid = 121;
    for (int i = 0; i < n_grid; ++i)
        grid.push_back(M_PI * (0.55 + 0.45 * i / (n_grid - 1.0)));
    const std::vector<T1Point> curve = t1_curve(p, m, grid, opts);
    FluxonBranch branch;
    for (const auto& pt : curve)
        if (pt.ok && pt.omega_q > 0.0) branch.table.emplace_back(pt.omega_q, pt.mat_elem_sq);
    if (branch.table.size() < 2)
        throw NumericalError("tabulate_fluxon_branch: fluxon branch could not be tabulated");
    std::sort(branch.table.begin(), branch.table.end());
    return branch;
}

QualityFactorFit fit_quality_factors(const std::vector<T1Datum>& data, const SingleModeParams& p,
                                     const LossModel& m0, const T1CurveOptions& opts) {
    if (data.size() < 3)
        throw ParameterError("fit_quality_factors: need at least 3 data points");
    m0.validate();

    const FluxonBranch branch = tabulate_fluxon_branch(p, m0, opts);
    auto log_t1_model = [&](double f, double q_l, double q_c) {
        return std::log(branch.t1(f, p, LossModel{q_l, q_c, m0.temperature}));
    };

    auto objective = [&](const Eigen::VectorXd& x) {
        const double q_l = std::exp(x(0)), q_c = std::exp(x(1));
        double sum = 0.0;
        for (const auto& d : data) {
            const double r = std::log(d.t1) - log_t1_model(d.omega_q, q_l, q_c);
            sum += r * r;
        }
        return sum;
    };

    Eigen::VectorXd x0(2);
    x0 << std::log(m0.q_l), std::log(m0.q_c);
    Eigen::VectorXd step = Eigen::VectorXd::Constant(2, 0.5);
    SimplexOptions sopts;
    sopts.max_iterations = 800;
    sopts.f_tolerance = 1e-14;
    sopts.x_tolerance = 1e-8;
    sopts.restarts = 4;
    const SimplexResult best = nelder_mead_restarts(objective, x0, step, sopts);

    QualityFactorFit fit;
    fit.model = LossModel{std::exp(best.x(0)), std::exp(best.x(1)), m0.temperature};
    fit.iterations = best.iterations;
    fit.converged = best.converged;
    for (const auto& d : data)
        fit.residuals.push_back(std::log(d.t1) -
                                log_t1_model(d.omega_q, fit.model.q_l, fit.model.q_c));
    double rss = 0.0;
    for (double r : fit.residuals) rss += r * r;
    fit.residual_rms = std::sqrt(rss / fit.residuals.size());

    // Degeneracy: every point on one side of the fitted crossover frequency.
    const double f_cross = std::sqrt(8.0 * p.e_c * p.e_l * fit.model.q_c / fit.model.q_l);
    int below = 0, above = 0;
    for (const auto& d : data) (d.omega_q < f_cross ? below : above)++;
    fit.degenerate = (below == 0 || above == 0);

    // Gauss-Newton covariance in log-parameter space, mapped back to (Q_L, Q_C).
    const int n = static_cast<int>(data.size());
    Eigen::MatrixXd jac(n, 2);
    const double eps = 1e-6;
    for (int j = 0; j < 2; ++j) {
        Eigen::VectorXd xp = best.x, xm = best.x;
        xp(j) += eps;
        xm(j) -= eps;
        for (int i = 0; i < n; ++i) {
            const double rp = std::log(data[i].t1) - log_t1_model(data[i].omega_q,
                                                                  std::exp(xp(0)), std::exp(xp(1)));
            const double rm = std::log(data[i].t1) - log_t1_model(data[i].omega_q,
                                                                  std::exp(xm(0)), std::exp(xm(1)));
            jac(i, j) = (rp - rm) / (2.0 * eps);
        }
    }
    const Eigen::Matrix2d jtj = jac.transpose() * jac;
    const double sigma2 = (n > 2) ? rss / (n - 2) : 0.0;
    if (jtj.determinant() > 1e-300) {
        const Eigen::Matrix2d cov_log = sigma2 * jtj.inverse();
        Eigen::Matrix2d scale = Eigen::Matrix2d::Zero();
        scale(0, 0) = fit.model.q_l;
        scale(1, 1) = fit.model.q_c;
        fit.covariance = scale * cov_log * scale;
    }
    return fit;
}

} // namespace fluxline
