#pragma once

// Inductive, capacitive and Purcell relaxation channels, the T1-vs-frequency
// curve, and least-squares extraction of the quality factors.

#include <optional>
#include <vector>

#include "fluxline/spectra.hpp"

namespace fluxline {

// coth(h f / 2 k_B T) + 1; the T -> 0 limit is exactly 2.
double thermal_factor(double f_ghz, double temperature_k);

// Gamma_ind = (E_L / hbar Q_L) (coth(h f_q / 2 k_B T) + 1) |<g-1|phi|g0>|^2, in 1/s.
double gamma_inductive(double e_l_ghz, double omega_q_ghz, double mat_elem_sq,
                       const LossModel& m);

// Gamma_cap = (hbar w_q^2 / 8 E_C Q_C) (coth + 1) |<g-1|phi|g0>|^2, in 1/s.
double gamma_capacitive(double e_c_ghz, double omega_q_ghz, double mat_elem_sq,
                        const LossModel& m);

// (g/Delta)^2 kappa as an energy decay rate in 1/s; all three inputs in GHz.
double gamma_purcell(double g_ghz, double delta_ghz, double kappa_ghz);

struct RateResult {
    double gamma_ind = 0.0;     // 1/s
    double gamma_cap = 0.0;     // 1/s
    double gamma_purcell = 0.0; // 1/s
    double t1_total = 0.0;      // s

    static RateResult compose(double ind, double cap, double purcell) {
        RateResult r{ind, cap, purcell, 0.0};
        r.t1_total = 1.0 / (ind + cap + purcell);
        return r;
    }
};

struct T1Point {
    double phi_ext = 0.0;
    double omega_q = 0.0;      // GHz
    double mat_elem_sq = 0.0;  // |<from|phi|to>|^2
    RateResult rates;
    bool ok = true;
    std::string diagnostic;
};

struct T1CurveOptions {
    int dim = kDefaultSingleModeDim;
    int levels = 6;
    int threads = 1;
    std::optional<ResonatorParams> resonator; // enables the Purcell channel
    LabelOptions label;
};

// Per flux point: locate the fluxon transition from the ground state and
// evaluate every loss channel at its frequency and matrix element.
std::vector<T1Point> t1_curve(const SingleModeParams& p, const LossModel& m,
                              const std::vector<double>& flux_grid,
                              const T1CurveOptions& opts = {});

struct T1Datum {
    double omega_q = 0.0; // GHz
    double t1 = 0.0;      // s
    double sigma = 0.0;   // optional, s
};

// Fluxon-branch matrix element |<g-1|phi|g0>|^2 tabulated against the
// transition frequency; this is the forward model behind the Q-factor fit.
struct FluxonBranch {
    std::vector<std::pair<double, double>> table; // (f_q GHz, |elem|^2), ascending

    double mat_elem_sq(double f_q) const;
    double t1(double f_q, const SingleModeParams& p, const LossModel& m) const;
};

FluxonBranch tabulate_fluxon_branch(const SingleModeParams& p, const LossModel& m,
                                    const T1CurveOptions& opts = {});

struct QualityFactorFit {
    LossModel model;
    double residual_rms = 0.0; // rms of log-T1 residuals
    std::vector<double> residuals;
    Eigen::Matrix2d covariance = Eigen::Matrix2d::Zero(); // over (q_l, q_c)
    int iterations = 0;
    bool converged = false;
    bool degenerate = false; // all data on one side of the crossover
};

// Least squares on log T1 over (Q_L, Q_C) at fixed temperature. The matrix
// element at each data frequency is interpolated from the model's fluxon
// branch.
QualityFactorFit fit_quality_factors(const std::vector<T1Datum>& data, const SingleModeParams& p,
                                     const LossModel& m0, const T1CurveOptions& opts = {});

} // namespace fluxline
